#include "mlkit/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlkit/coset.hpp"
#include "mlkit/errors.hpp"
#include "mlkit/formula.hpp"
#include "mlkit/ml_checker.hpp"

namespace mlkit {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

Rational canonical_rational(const Json& v, const std::string& field) {
  if (!v.is_string()) throw InputError("spec field " + field + " must be a rational string such as \"-3/4\"");
  const std::string text = v.get<std::string>();
  const Rational r = Rational::parse(text);
  if (r.str() != text) {
    throw InputError("spec field " + field + " is not in canonical form: '" + text + "' (expected '" + r.str() + "')");
  }
  return r;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

GroupSpecFile GroupSpecFile::parse(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("spec must be a JSON object");
  GroupSpecFile spec;
  const std::string kind = doc.value("backend", std::string());
  if (kind == "curve") {
    if (!doc.contains("a") || !doc.contains("b")) throw InputError("curve spec needs fields a and b");
    spec.backend = GroupBackend::curve(canonical_rational(doc["a"], "a"), canonical_rational(doc["b"], "b"));
  } else if (kind == "circle") {
    spec.backend = GroupBackend::circle();
  } else {
    throw InputError("spec backend must be \"curve\" or \"circle\"");
  }
  if (doc.contains("generators")) {
    const Json& gens = doc["generators"];
    if (!gens.is_array()) throw InputError("spec generators must be a list of [x, y] pairs");
    for (const Json& g : gens) {
      if (!g.is_array() || g.size() != 2) throw InputError("each generator must be a pair [x, y]");
      spec.generators.push_back(GroupPoint::affine(canonical_rational(g[0], "generator x"),
                                                   canonical_rational(g[1], "generator y")));
    }
  }
  if (doc.contains("rank")) {
    if (!doc["rank"].is_number_unsigned()) throw InputError("spec rank must be a non-negative integer");
    spec.claimed_rank = doc["rank"].get<std::size_t>();
  }
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) throw InputError("spec label must be a string");
    spec.label = doc["label"].get<std::string>();
  }
  validate(spec.backend);
  for (const auto& g : spec.generators) {
    if (!on_variety(spec.backend, g)) throw ValidationError("generator " + g.str() + " is not on the variety");
  }
  return spec;
}

GroupSpecFile GroupSpecFile::load(const fs::path& path) { return parse(read_file(path)); }

fs::path PointCache::entry_path(const GroupBackend& backend, long height_bound) const {
  std::string key = backend.fingerprint();
  std::replace(key.begin(), key.end(), ':', '_');
  std::replace(key.begin(), key.end(), '/', 'd');
  return dir_ / ("points-v" + std::to_string(kFormatVersion) + "-" + key + "-h" + std::to_string(height_bound) + ".json");
}

std::optional<std::vector<GroupPoint>> PointCache::load(const GroupBackend& backend, long height_bound) const {
  const fs::path path = entry_path(backend, height_bound);
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  try {
    const Json doc = Json::parse(read_file(path));
    if (doc.at("version").get<int>() != kFormatVersion) return std::nullopt;
    if (doc.at("fingerprint").get<std::string>() != backend.fingerprint()) return std::nullopt;
    if (doc.at("height").get<long>() != height_bound) return std::nullopt;
    std::vector<GroupPoint> points;
    for (const Json& p : doc.at("points")) {
      GroupPoint q = GroupPoint::parse(p.get<std::string>());
      if (!on_variety(backend, q) || naive_height(q) > height_bound) return std::nullopt;
      points.push_back(std::move(q));
    }
    return points;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void PointCache::store(const GroupBackend& backend, long height_bound, const std::vector<GroupPoint>& points) const {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) return;
  Json doc;
  doc["version"] = kFormatVersion;
  doc["fingerprint"] = backend.fingerprint();
  doc["height"] = height_bound;
  Json list = Json::array();
  for (const GroupPoint& p : points) list.push_back(p.str());
  doc["points"] = std::move(list);

  const fs::path target = entry_path(backend, height_bound);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;
    out << doc.dump() << '\n';
    if (!out) return;
  }
  fs::rename(tmp, target, ec);
  if (ec) fs::remove(tmp, ec);
}

std::vector<GroupPoint> PointCache::points(const GroupBackend& backend, long height_bound) const {
  if (auto cached = load(backend, height_bound)) return std::move(*cached);
  auto points = enumerate_rational_points(backend, height_bound);
  store(backend, height_bound, points);
  return points;
}

namespace {

struct Config {
  std::string spec;
  long bound = kDefaultCoeffBound;
  long height = 100;
  long bins = 10;
  bool machine = false;
  std::string cache_dir;
  bool no_cache = false;
  double ceiling = kDefaultSizeCeiling;
};

std::optional<fs::path> cache_dir(const Config& cfg) {
  if (cfg.no_cache) return std::nullopt;
  if (!cfg.cache_dir.empty()) return fs::path(cfg.cache_dir);
  if (const char* env = std::getenv("MLKIT_CACHE_DIR"); env && *env) return fs::path(env);
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "mlkit";
  return std::nullopt;
}

GammaSpec load_gamma(const Config& cfg) {
  if (cfg.spec.empty()) throw InputError("--spec is required");
  const GroupSpecFile spec = GroupSpecFile::load(cfg.spec);
  return GammaSpec::from_generators(spec.backend, spec.generators, spec.claimed_rank);
}

std::vector<long> parse_long_list(const std::string& text, const std::string& what) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) throw InputError(what + " must be a comma-separated integer list, got '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError(what + " must not be empty");
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  if (text.find_first_not_of(" \t") == std::string::npos) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    out.push_back(Rational::parse(item));
  }
  return out;
}

std::vector<GroupPoint> parse_points(const std::vector<std::string>& texts) {
  std::vector<GroupPoint> out;
  for (const auto& t : texts) out.push_back(GroupPoint::parse(t));
  return out;
}

Json coords_json(const Coords& c) { return Json{{"free", c.free}, {"tors", c.tors}}; }

Json tuple_json(const Tuple& t) {
  Json a = Json::array();
  for (const Coords& c : t) a.push_back(coords_json(c));
  return a;
}

Json points_json(std::span<const GroupPoint> pts) {
  Json a = Json::array();
  for (const GroupPoint& p : pts) a.push_back(p.str());
  return a;
}

std::string points_text(std::span<const GroupPoint> pts) {
  std::string s = "(";
  for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? ", " : "") + pts[i].str();
  return s + ")";
}

Coords coords_from_json(const Json& j, const GroupShape& shape) {
  Coords c;
  if (j.is_array()) {
    c.free = j.get<std::vector<long>>();
    c.tors.assign(shape.torsion.size(), 0);
  } else if (j.is_object()) {
    c.free = j.value("free", std::vector<long>{});
    c.tors = j.value("tors", std::vector<long>(shape.torsion.size(), 0));
  } else {
    throw InputError("coordinates must be an integer list or {\"free\": [...], \"tors\": [...]}");
  }
  check_coords(shape, c);
  return c;
}

MLDecomposition parse_decomposition(const std::string& text, const GroupShape& shape, std::size_t n) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("decomposition is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw InputError("decomposition must be a JSON list of {\"base\": ..., \"k\": ...}");
  MLDecomposition d;
  try {
    for (const Json& pair : doc) {
      KernelCoset kc;
      kc.k = pair.at("k").get<std::vector<long>>();
      for (const Json& slot : pair.at("base")) kc.base.push_back(coords_from_json(slot, shape));
      if (kc.k.size() != n || kc.base.size() != n) throw InputError("decomposition pair does not have arity " + std::to_string(n));
      d.push_back(std::move(kc));
    }
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed decomposition: ") + e.what());
  }
  return d;
}

MultiPoly parse_ml_poly(const std::string& text, std::size_t n) {
  MultiPoly p = parse_polynomial(text, 2 * n);
  if (p.arity() != 2 * n) {
    throw InputError("polynomial uses x" + std::to_string(p.arity()) + " but n = " + std::to_string(n) +
                     " points have only " + std::to_string(2 * n) + " coordinates");
  }
  return p;
}

class Emitter {
 public:
  Emitter(std::ostream& out, bool machine) : out_(out), machine_(machine) {}
  bool machine() const { return machine_; }
  void record(const Json& j) { out_ << j.dump() << '\n'; }
  void line(const std::string& s) { out_ << s << '\n'; }

 private:
  std::ostream& out_;
  bool machine_;
};

std::string histogram_bin_label(const Histogram& h, std::size_t i) {
  const bool last = i + 1 == h.counts.size();
  return "[" + h.edge(i).str() + ", " + h.edge(i + 1).str() + (last ? "]" : ")");
}

void emit_histogram(Emitter& em, const Histogram& h, const std::string& command, const std::string& subset) {
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    if (em.machine()) {
      em.record(Json{{"command", command}, {"bin", i}, {"lo", h.edge(i).str()}, {"hi", h.edge(i + 1).str()},
                     {"count", h.counts[i]}});
    } else {
      em.line(histogram_bin_label(h, i) + ": " + std::to_string(h.counts[i]));
    }
  }
  if (em.machine()) {
    em.record(Json{{"command", command}, {"subset", subset}, {"total", h.total()}});
  } else {
    em.line("total: " + std::to_string(h.total()) + " (" + subset + ")");
  }
}

void cmd_curve_info(const Config& cfg, Emitter& em) {
  if (cfg.spec.empty()) throw InputError("--spec is required");
  const GroupSpecFile spec = GroupSpecFile::load(cfg.spec);
  const GammaSpec gamma = GammaSpec::from_generators(spec.backend, spec.generators, spec.claimed_rank);
  const GroupBackend& b = gamma.backend();
  const TorsionGroup tors = torsion_subgroup(b);
  const int components = real_components(b);
  const std::size_t gamma_torsion_gens = gamma.torsion().generators.size();
  if (em.machine()) {
    Json j{{"command", "curve-info"}, {"backend", b.fingerprint()}, {"equation", b.str()}};
    if (!spec.label.empty()) j["label"] = spec.label;
    if (b.is_curve()) {
      j["disc_term"] = b.discriminant_term().str();
      j["discriminant"] = (Rational(-16) * b.discriminant_term()).str();
    }
    j["components"] = components;
    j["torsion"] = tors.str();
    j["torsion_points"] = points_json(torsion_points(b));
    j["rank"] = gamma.rank();
    j["gamma_torsion"] = gamma.torsion().str();
    j["audit_bound"] = gamma.audit_bound();
    em.record(j);
    return;
  }
  if (!spec.label.empty()) em.line("label: " + spec.label);
  em.line(std::string(b.is_curve() ? "curve: " : "circle: ") + b.str());
  if (b.is_curve()) {
    em.line("4a^3+27b^2: " + b.discriminant_term().str());
    em.line("discriminant: " + (Rational(-16) * b.discriminant_term()).str());
  }
  em.line("components: " + std::to_string(components) + ", torsion: " + tors.str());
  em.line("torsion points: " + points_text(torsion_points(b)));
  em.line("Gamma: rank " + std::to_string(gamma.rank()) + ", torsion " + gamma.torsion().str() + " (" +
          std::to_string(gamma_torsion_gens) + " torsion generator(s))");
  em.line("audit: no relation among free generators with coefficients in [-" + std::to_string(gamma.audit_bound()) +
          ", " + std::to_string(gamma.audit_bound()) + "]");
}

void cmd_point(const std::string& op, const Config& cfg, const std::vector<std::string>& args, Emitter& em) {
  const GammaSpec gamma = load_gamma(cfg);
  const GroupBackend& b = gamma.backend();
  Json j{{"command", "point-" + op}};
  std::string text;
  if (op == "add") {
    if (args.size() != 2) throw InputError("point add takes two points");
    const auto pts = parse_points(args);
    text = add(b, pts[0], pts[1]).str();
    j["result"] = text;
  } else if (op == "mul") {
    if (args.size() != 2) throw InputError("point mul takes a multiplier and a point");
    const long k = parse_long_list(args[0], "multiplier").at(0);
    const GroupPoint p = GroupPoint::parse(args[1]);
    text = scalar_mul(b, k, p).str();
    j["result"] = text;
  } else {
    if (args.size() != 1) throw InputError("point decompose takes one point");
    const auto d = decompose(gamma, GroupPoint::parse(args[0]), cfg.bound);
    if (const auto* c = std::get_if<Coords>(&d)) {
      text = c->str();
      j["result"] = "coords";
      j["coords"] = coords_json(*c);
    } else {
      text = "undecided(bound=" + std::to_string(cfg.bound) + ")";
      j["result"] = "undecided";
      j["bound"] = cfg.bound;
    }
  }
  if (em.machine()) {
    em.record(j);
  } else {
    em.line(text);
  }
}

struct CosetArgs {
  std::string k;
  long e = 0;
  std::string op;
  std::string left;
  std::string right;
  std::string union_text;
  std::size_t n = 1;
  std::vector<std::string> points;
};

void emit_union(Emitter& em, const std::string& command, const CosetUnion& u, const Json& extra = Json::object()) {
  if (em.machine()) {
    Json j{{"command", command}, {"n", u.arity()}, {"modulus", u.modulus()}};
    Json res = Json::array();
    for (const auto& r : u.residues()) res.push_back(r);
    j["residues"] = std::move(res);
    j["text"] = u.str();
    for (const auto& [key, value] : extra.items()) j[key] = value;
    em.record(j);
  } else {
    em.line(u.str());
    for (const auto& [key, value] : extra.items()) em.line(key + ": " + value.dump());
  }
}

void cmd_coset(const std::string& op, const Config& cfg, const CosetArgs& a, Emitter& em) {
  const GammaSpec gamma = load_gamma(cfg);
  const GroupShape shape = gamma.shape();
  if (op == "dke") {
    if (a.k.empty() || a.e < 1) throw InputError("coset dke needs --k and --e >= 1");
    const auto k = parse_long_list(a.k, "--k");
    emit_union(em, "coset-dke", dke(gamma, k, a.e, cfg.ceiling));
  } else if (op == "kernel") {
    if (a.k.empty()) throw InputError("coset kernel needs --k");
    const auto k = parse_long_list(a.k, "--k");
    const KernelDesc desc = kernel_lattice(gamma, k, cfg.ceiling);
    Json basis = Json::array();
    std::vector<std::string> rows;
    for (const IntVector& v : desc.free_basis) {
      std::vector<std::string> entries;
      for (const Integer& x : v) entries.push_back(x.get_str());
      basis.push_back(entries);
      std::string row = "[";
      for (std::size_t i = 0; i < entries.size(); ++i) row += (i ? ", " : "") + entries[i];
      rows.push_back(row + "]");
    }
    if (em.machine()) {
      em.record(Json{{"command", "coset-kernel"}, {"n", desc.n}, {"free_basis", basis},
                     {"torsion_solutions", desc.torsion_solutions}});
    } else {
      std::string s = "free basis: {";
      for (std::size_t i = 0; i < rows.size(); ++i) s += (i ? ", " : "") + rows[i];
      em.line(s + "}");
      em.line("torsion solutions: " + std::to_string(desc.torsion_solutions.size()));
    }
  } else if (op == "combine") {
    if (a.left.empty()) throw InputError("coset combine needs --left");
    const CosetUnion left = CosetUnion::parse(a.left, shape, a.n);
    if (a.op == "complement") {
      emit_union(em, "coset-combine", complement(left, cfg.ceiling));
      return;
    }
    if (a.right.empty()) throw InputError("coset combine --op " + a.op + " needs --right");
    const CosetUnion right = CosetUnion::parse(a.right, shape, a.n);
    if (a.op == "union") {
      emit_union(em, "coset-combine", unite(left, right, cfg.ceiling));
    } else if (a.op == "intersect") {
      emit_union(em, "coset-combine", intersect(left, right, cfg.ceiling));
    } else if (a.op == "difference") {
      emit_union(em, "coset-combine", difference(left, right, cfg.ceiling));
    } else {
      throw InputError("unknown --op '" + a.op + "' (union, intersect, difference, complement)");
    }
  } else {
    std::optional<CosetUnion> u;
    if (!a.union_text.empty()) {
      u = CosetUnion::parse(a.union_text, shape, a.n);
    } else if (!a.k.empty() && a.e >= 1) {
      u = dke(gamma, parse_long_list(a.k, "--k"), a.e, cfg.ceiling);
    } else {
      throw InputError("coset member needs --union or --k with --e");
    }
    const auto pts = parse_points(a.points);
    const Decision d = member(gamma, *u, pts, cfg.bound);
    if (em.machine()) {
      Json j{{"command", "coset-member"}, {"points", points_json(pts)}, {"union", u->str()}, {"result", d.str()}};
      em.record(j);
    } else {
      em.line(d.str());
    }
  }
}

struct MlArgs {
  std::string poly;
  std::size_t n = 1;
  std::string decomp;
};

Json verdict_json(const Verdict& v) {
  Json j{{"verdict", v.kind == Verdict::Kind::kVerified ? "verified"
                     : v.kind == Verdict::Kind::kCounterexample ? "counterexample"
                                                                : "inconclusive"},
         {"bound", v.bound},
         {"skipped", v.skipped}};
  if (v.kind == Verdict::Kind::kCounterexample) {
    j["direction"] = direction_name(v.direction);
    j["witness"] = tuple_json(v.witness);
    j["points"] = points_json(v.witness_points);
  }
  if (v.kind == Verdict::Kind::kInconclusive) {
    j["reason"] = v.reason;
    Json un = Json::array();
    for (const Tuple& t : v.unexplained) un.push_back(tuple_json(t));
    j["unexplained"] = std::move(un);
  }
  return j;
}

Json decomposition_json(const MLDecomposition& d) {
  Json a = Json::array();
  for (const KernelCoset& kc : d) a.push_back(Json{{"base", tuple_json(kc.base)}, {"k", kc.k}});
  return a;
}

void cmd_ml(const std::string& op, const Config& cfg, const MlArgs& a, Emitter& em) {
  const GammaSpec gamma = load_gamma(cfg);
  if (a.n < 1) throw InputError("--n must be at least 1");
  if (a.poly.empty()) throw InputError("--poly is required");
  const MultiPoly p = parse_ml_poly(a.poly, a.n);
  if (op == "solve") {
    const SolutionSet sols = solutions_bounded(gamma, p, a.n, cfg.bound, cfg.ceiling);
    for (const Tuple& t : sols.solutions) {
      const auto pts = realize_tuple(gamma, t);
      if (em.machine()) {
        em.record(Json{{"command", "ml-solve"}, {"coords", tuple_json(t)}, {"points", points_json(pts)}});
      } else {
        em.line(points_text(pts) + "  " + tuple_str(t));
      }
    }
    if (em.machine()) {
      em.record(Json{{"command", "ml-solve"}, {"bound", sols.bound}, {"solutions", sols.solutions.size()},
                     {"skipped", sols.skipped.size()}});
    } else {
      em.line("solutions: " + std::to_string(sols.solutions.size()) + " (bound=" + std::to_string(sols.bound) +
              ", skipped with identity in a used slot: " + std::to_string(sols.skipped.size()) + ")");
    }
  } else if (op == "verify") {
    if (a.decomp.empty()) throw InputError("ml verify needs --decomp");
    const MLDecomposition d = parse_decomposition(a.decomp, gamma.shape(), a.n);
    const Verdict v = verify_decomposition(gamma, p, a.n, d, cfg.bound, cfg.ceiling);
    if (em.machine()) {
      Json j{{"command", "ml-verify"}};
      j.update(verdict_json(v));
      em.record(j);
    } else {
      em.line(v.str());
      if (v.kind == Verdict::Kind::kCounterexample) em.line("witness coords: " + tuple_str(v.witness));
    }
  } else {
    const Suggestion s = suggest_decomposition(gamma, p, a.n, cfg.bound, cfg.ceiling);
    if (em.machine()) {
      Json j{{"command", "ml-suggest"}, {"decomposition", decomposition_json(s.decomposition)}};
      j.update(verdict_json(s.verdict));
      em.record(j);
    } else {
      if (s.verdict.verified()) em.line("decomposition: " + decomposition_str(s.decomposition));
      em.line(s.verdict.str());
      for (const Tuple& t : s.verdict.unexplained) em.line("unexplained: " + tuple_str(t));
    }
  }
}

struct EvalArgs {
  std::string formula;
  std::string formula_file;
  std::vector<std::string> x;
};

void cmd_eval(const Config& cfg, const EvalArgs& a, Emitter& em) {
  const GammaSpec gamma = load_gamma(cfg);
  if (a.formula.empty() == a.formula_file.empty()) throw InputError("give exactly one of --formula and --formula-file");
  const Formula f = parse_formula(a.formula.empty() ? read_file(a.formula_file) : a.formula);
  std::vector<std::string> queries = a.x;
  if (queries.empty()) queries.emplace_back();
  const EvalOptions options{cfg.bound, cfg.ceiling};
  for (const std::string& q : queries) {
    const auto x = parse_rational_list(q);
    if (x.size() != f.free_arity()) {
      throw InputError("formula has " + std::to_string(f.free_arity()) + " free variable(s) but --x gives " +
                       std::to_string(x.size()) + " value(s)");
    }
    const TriBool v = eval_formula(gamma, f, x, options);
    if (em.machine()) {
      Json xs = Json::array();
      for (const Rational& r : x) xs.push_back(r.str());
      Json j{{"command", "eval"}, {"formula", f.str()}, {"x", xs},
             {"value", v.is_true() ? "true" : v.is_false() ? "false" : "unknown"}};
      if (v.is_unknown()) j["bound"] = v.bound;
      Json ws = Json::array();
      for (const Witness& w : v.witnesses) {
        ws.push_back(Json{{"block", w.block_id}, {"coords", tuple_json(w.coords)}, {"points", points_json(w.points)}});
      }
      if (v.is_true()) j["witnesses"] = std::move(ws);
      em.record(j);
    } else if (queries.size() == 1) {
      em.line(v.str());
    } else {
      em.line("x=(" + q + "): " + v.str());
    }
  }
}

struct DensityArgs {
  std::string lo;
  std::string hi;
  std::string k;
  long e = 0;
};

void cmd_density(const Config& cfg, const DensityArgs& a, Emitter& em) {
  const GammaSpec gamma = load_gamma(cfg);
  const Rational lo = Rational::parse(a.lo);
  const Rational hi = Rational::parse(a.hi);
  if (!a.k.empty()) {
    if (a.e < 1) throw InputError("density with --k needs --e >= 1");
    const auto k = parse_long_list(a.k, "--k");
    if (k.size() != 1) throw InputError("density sampling supports only n = 1 characters");
    const CosetUnion u = dke(gamma, k, a.e, cfg.ceiling);
    emit_histogram(em, density_sample(gamma, u, lo, hi, cfg.height, cfg.bins, cfg.bound), "density", u.str());
  } else {
    emit_histogram(em, projection_density(gamma, lo, hi, cfg.height, cfg.bins, cfg.bound), "density", "Gamma");
  }
}

struct AxiomArgs {
  long n_max = 3;
  long grid = 16;
};

void cmd_axioms(const Config& cfg, const AxiomArgs& a, Emitter& em) {
  const GammaSpec gamma = load_gamma(cfg);
  AxiomCheckOptions opts;
  opts.n_max = a.n_max;
  opts.height_bound = cfg.height;
  opts.grid = a.grid;
  opts.coeff_bound = cfg.bound;
  std::vector<GroupPoint> points;
  if (const auto dir = cache_dir(cfg)) {
    points = PointCache(*dir).points(gamma.backend(), cfg.height);
  } else {
    points = enumerate_rational_points(gamma.backend(), cfg.height);
  }
  const AxiomReport report = check_axioms_bounded(gamma, opts, points);
  for (const AxiomRow& row : report.rows) {
    if (em.machine()) {
      Json viol = Json::array();
      for (const auto& v : row.violations) {
        viol.push_back(Json{{"q", v.q.str()}, {"nq", v.nq.str()}, {"nq_coords", coords_json(v.nq_coords)}});
      }
      em.record(Json{{"command", "axioms"}, {"n", row.n}, {"cells", row.cells}, {"cells_hit", row.cells_hit},
                     {"points_sampled", row.points_sampled}, {"purity_checked", row.purity_checked},
                     {"violations", viol}, {"quotient_order", row.quotient.order},
                     {"quotient", row.quotient.str()}});
    } else {
      const std::string n = std::to_string(row.n);
      em.line("n=" + n + ": density evidence " + std::to_string(row.cells_hit) + "/" + std::to_string(row.cells) +
              " cells hit by " + std::to_string(row.points_sampled) + " point(s) of " + n + "Gamma; purity " +
              std::to_string(row.purity_checked) + " checked, " + std::to_string(row.violations.size()) +
              " violation(s); |Gamma/" + n + "Gamma| = " + std::to_string(row.quotient.order) + " (" +
              row.quotient.str() + ")");
      for (const auto& v : row.violations) {
        em.line("  purity violation: q = " + v.q.str() + " not in Gamma, but " + n + "q = " + v.nq.str() +
                " = " + v.nq_coords.str());
      }
    }
  }
  if (em.machine()) {
    em.record(Json{{"command", "axioms"}, {"finite_group", report.finite_group}, {"low_coverage", report.low_coverage},
                   {"height", cfg.height}, {"bound", cfg.bound}, {"note", report.ml_note}});
  } else {
    em.line("density and purity results are bounded evidence (height <= " + std::to_string(cfg.height) +
            ", coefficients in [-" + std::to_string(cfg.bound) + ", " + std::to_string(cfg.bound) + "]), not proofs");
    if (report.low_coverage) {
      em.line(std::string("flag: low density evidence") + (report.finite_group ? " (Gamma is finite)" : ""));
    }
    em.line("note: " + report.ml_note);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact toolkit for finitely generated subgroups of elliptic curves and the circle", "mlkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  app.add_option("--spec", cfg.spec, "Group spec file (JSON)");
  app.add_option("--bound", cfg.bound, "Coefficient bound B for searches")->check(CLI::NonNegativeNumber);
  app.add_option("--height", cfg.height, "Naive height bound for point enumeration")->check(CLI::PositiveNumber);
  app.add_option("--bins", cfg.bins, "Histogram bins")->check(CLI::PositiveNumber);
  app.add_flag("--machine", cfg.machine, "Emit one JSON record per line");
  app.add_option("--cache-dir", cfg.cache_dir, "Point cache directory (default: $MLKIT_CACHE_DIR, else ~/.cache/mlkit)");
  app.add_flag("--no-cache", cfg.no_cache, "Do not read or write the point cache");
  app.add_option("--ceiling", cfg.ceiling, "Size ceiling for finite enumerations")->check(CLI::PositiveNumber);

  auto* info = app.add_subcommand("curve-info", "Discriminant, components, torsion and generator audit");

  std::vector<std::string> point_args;
  auto* point = app.add_subcommand("point", "Group law and decomposition");
  point->require_subcommand(1);
  auto* p_add = point->add_subcommand("add", "P + Q");
  p_add->add_option("points", point_args, "Two points \"(x, y)\" or O")->expected(2)->required();
  auto* p_mul = point->add_subcommand("mul", "k * P");
  p_mul->add_option("args", point_args, "Multiplier and point")->expected(2)->required();
  auto* p_dec = point->add_subcommand("decompose", "Coordinates of P in Gamma");
  p_dec->add_option("point", point_args, "Point")->expected(1)->required();

  CosetArgs cargs;
  auto* coset = app.add_subcommand("coset", "Character kernels and coset unions");
  coset->require_subcommand(1);
  auto* c_dke = coset->add_subcommand("dke", "chi_k^-1(e Gamma) modulo (e Gamma)^n");
  c_dke->add_option("--k", cargs.k, "Character, comma separated")->required();
  c_dke->add_option("--e", cargs.e, "Modulus e")->required();
  auto* c_ker = coset->add_subcommand("kernel", "Exact kernel of chi_k in Gamma^n");
  c_ker->add_option("--k", cargs.k, "Character, comma separated")->required();
  auto* c_comb = coset->add_subcommand("combine", "Boolean combination of coset unions");
  c_comb->add_option("--op", cargs.op, "union, intersect, difference or complement")->required();
  c_comb->add_option("--left", cargs.left, "Union text, e.g. \"mod 2: {[0]}\"")->required();
  c_comb->add_option("--right", cargs.right, "Union text");
  c_comb->add_option("--n", cargs.n, "Arity")->check(CLI::PositiveNumber);
  auto* c_mem = coset->add_subcommand("member", "Is a tuple in a coset union?");
  c_mem->add_option("--union", cargs.union_text, "Union text");
  c_mem->add_option("--k", cargs.k, "Character for a dke union");
  c_mem->add_option("--e", cargs.e, "Modulus for a dke union");
  c_mem->add_option("--n", cargs.n, "Arity of --union")->check(CLI::PositiveNumber);
  c_mem->add_option("points", cargs.points, "Points of the tuple")->required();

  MlArgs margs;
  auto* ml = app.add_subcommand("ml", "Bounded Mordell-Lang solving and verification");
  ml->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> ml_ops;
  for (const char* name : {"solve", "verify", "suggest"}) {
    auto* sub = ml->add_subcommand(name, std::string(name) + " for p = 0 on Gamma^n");
    sub->add_option("--poly", margs.poly, "Polynomial in x1..x2n (S-expression)")->required();
    sub->add_option("--n", margs.n, "Number of points")->check(CLI::PositiveNumber);
    if (std::string(name) == "verify") {
      sub->add_option("--decomp", margs.decomp, "JSON list of {\"base\": [...], \"k\": [...]}")->required();
    }
    ml_ops.emplace_back(name, sub);
  }

  EvalArgs eargs;
  auto* ev = app.add_subcommand("eval", "Three-valued evaluation of a formula");
  ev->add_option("--formula", eargs.formula, "Formula text");
  ev->add_option("--formula-file", eargs.formula_file, "File holding the formula");
  ev->add_option("--x", eargs.x, "Comma-separated free variable values; repeat for several queries");

  DensityArgs dargs;
  auto* dens = app.add_subcommand("density", "Histogram of x-coordinates of Gamma points");
  dens->add_option("--lo", dargs.lo, "Interval start (rational)")->required();
  dens->add_option("--hi", dargs.hi, "Interval end (rational)")->required();
  dens->add_option("--k", dargs.k, "Restrict to chi_k^-1(e Gamma) (n = 1)");
  dens->add_option("--e", dargs.e, "Modulus for --k");

  AxiomArgs aargs;
  auto* ax = app.add_subcommand("axioms", "Bounded evidence for density, purity and quotient sizes");
  ax->add_option("--nmax", aargs.n_max, "Largest n")->check(CLI::PositiveNumber);
  ax->add_option("--grid", aargs.grid, "Grid cells for density evidence")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << '\n';
    err << "run 'mlkit --help' for usage\n";
    return 2;
  }

  Emitter em(out, cfg.machine);
  try {
    if (info->parsed()) {
      cmd_curve_info(cfg, em);
    } else if (point->parsed()) {
      cmd_point(p_add->parsed() ? "add" : p_mul->parsed() ? "mul" : "decompose", cfg, point_args, em);
    } else if (coset->parsed()) {
      const std::string op = c_dke->parsed() ? "dke" : c_ker->parsed() ? "kernel" : c_comb->parsed() ? "combine" : "member";
      (void)c_mem;
      cmd_coset(op, cfg, cargs, em);
    } else if (ml->parsed()) {
      for (const auto& [name, sub] : ml_ops) {
        if (sub->parsed()) cmd_ml(name, cfg, margs, em);
      }
    } else if (ev->parsed()) {
      cmd_eval(cfg, eargs, em);
    } else if (dens->parsed()) {
      cmd_density(cfg, dargs, em);
    } else if (ax->parsed()) {
      cmd_axioms(cfg, aargs, em);
    }
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << " (attempted size " << static_cast<long long>(e.attempted()) << ")\n";
    return 3;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace mlkit
