#include "mlkit/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "mlkit/errors.hpp"
#include "mlkit/smith.hpp"

namespace mlkit {

namespace {

std::string join(const std::vector<long>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

long mod_floor(long a, long m) {
  const long r = a % m;
  return r < 0 ? r + m : r;
}

long zigzag(long v) { return v > 0 ? 2 * v - 1 : -2 * v; }

double box_size(std::size_t dim, long bound) { return std::pow(2.0 * static_cast<double>(bound) + 1.0, static_cast<double>(dim)); }

}  // namespace

std::string Coords::str() const { return "free=[" + join(free) + "] tors=[" + join(tors) + "]"; }

std::string tuple_str(const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + t[i].str();
  return s + ")";
}

std::vector<long> GroupShape::component_moduli(long l) const {
  std::vector<long> m(rank, l);
  for (long d : torsion) m.push_back(std::gcd(l, d));
  return m;
}

struct GammaSpec::Cache {
  std::mutex mutex;
  std::vector<std::deque<GroupPoint>> positive;  // positive[g][m] = m * g
  std::vector<std::deque<GroupPoint>> negative;  // negative[g][m] = -m * g
};

GammaSpec::GammaSpec(GroupBackend backend, std::vector<GroupPoint> free, TorsionGroup torsion,
                     std::vector<GroupPoint> ambient_torsion, long audit_bound)
    : backend_(std::move(backend)),
      free_(std::move(free)),
      torsion_(std::move(torsion)),
      ambient_torsion_(std::move(ambient_torsion)),
      audit_bound_(audit_bound),
      cache_(std::make_shared<Cache>()) {
  cache_->positive.resize(free_.size());
  cache_->negative.resize(free_.size());
  for (std::size_t g = 0; g < free_.size(); ++g) {
    cache_->positive[g].push_back(GroupPoint::identity());
    cache_->negative[g].push_back(GroupPoint::identity());
  }
  const long count = torsion_.order();
  for (long idx = 0; idx < count; ++idx) {
    const std::vector<long> res = torsion_residues(static_cast<std::size_t>(idx));
    GroupPoint acc = GroupPoint::identity();
    for (std::size_t j = 0; j < res.size(); ++j) {
      acc = detail::add_unchecked(backend_, acc, detail::scalar_mul_unchecked(backend_, res[j], torsion_.generators[j]));
    }
    torsion_elements_.push_back(acc);
  }
}

GammaSpec GammaSpec::from_generators(const GroupBackend& backend, const std::vector<GroupPoint>& generators,
                                     std::optional<std::size_t> claimed_rank, long audit_bound) {
  validate(backend);
  std::vector<GroupPoint> ambient = torsion_points(backend);
  std::vector<GroupPoint> free;
  std::vector<GroupPoint> torsion_gens;
  for (const GroupPoint& raw : generators) {
    if (!on_variety(backend, raw)) {
      throw ValidationError("generator " + raw.str() + " is not on " + backend.str());
    }
    const GroupPoint g = normalize(backend, raw);
    if (g.is_identity()) continue;
    if (std::find(ambient.begin(), ambient.end(), g) != ambient.end()) {
      torsion_gens.push_back(g);
    } else {
      free.push_back(g);
    }
  }
  if (claimed_rank && *claimed_rank != free.size()) {
    throw ValidationError("claimed rank " + std::to_string(*claimed_rank) + " but " + std::to_string(free.size()) +
                          " generators have infinite order");
  }
  // Close the torsion generators under addition.
  std::vector<GroupPoint> closure{GroupPoint::identity()};
  for (std::size_t i = 0; i < closure.size(); ++i) {
    for (const GroupPoint& g : torsion_gens) {
      GroupPoint s = detail::add_unchecked(backend, closure[i], g);
      if (std::find(closure.begin(), closure.end(), s) == closure.end()) closure.push_back(std::move(s));
    }
  }
  TorsionGroup torsion = structure_of_finite_subgroup(backend, std::move(closure));
  GammaSpec gamma(backend, std::move(free), std::move(torsion), std::move(ambient), audit_bound);
  gamma.audit_independence();
  return gamma;
}

const GroupPoint& GammaSpec::multiple(std::size_t gen, long m) const {
  if (gen >= free_.size()) throw InputError("generator index out of range");
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto& table = m >= 0 ? cache_->positive[gen] : cache_->negative[gen];
  const std::size_t idx = static_cast<std::size_t>(m >= 0 ? m : -m);
  const GroupPoint step = m >= 0 ? free_[gen] : negate(backend_, free_[gen]);
  while (table.size() <= idx) table.push_back(detail::add_unchecked(backend_, table.back(), step));
  return table[idx];
}

std::vector<long> GammaSpec::torsion_residues(std::size_t index) const {
  const auto& factors = torsion_.invariant_factors;
  std::vector<long> res(factors.size());
  for (std::size_t j = factors.size(); j-- > 0;) {
    res[j] = static_cast<long>(index % static_cast<std::size_t>(factors[j]));
    index /= static_cast<std::size_t>(factors[j]);
  }
  return res;
}

const GroupPoint& GammaSpec::torsion_point(std::span<const long> residues) const {
  const auto& factors = torsion_.invariant_factors;
  if (residues.size() != factors.size()) throw InputError("torsion residue count does not match invariant factors");
  std::size_t index = 0;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    if (residues[j] < 0 || residues[j] >= factors[j]) throw InputError("torsion residue out of range");
    index = index * static_cast<std::size_t>(factors[j]) + static_cast<std::size_t>(residues[j]);
  }
  return torsion_elements_[index];
}

bool GammaSpec::is_ambient_torsion(const GroupPoint& p) const {
  return std::find(ambient_torsion_.begin(), ambient_torsion_.end(), p) != ambient_torsion_.end();
}

void GammaSpec::audit_independence() const {
  if (free_.empty()) return;
  for (const auto& k : ordered_box(free_.size(), audit_bound_, 1e9)) {
    // k and -k give the same relation; only test the one with a positive leading entry.
    const auto lead = std::find_if(k.begin(), k.end(), [](long v) { return v != 0; });
    if (lead == k.end() || *lead < 0) continue;
    GroupPoint sum = GroupPoint::identity();
    for (std::size_t i = 0; i < k.size(); ++i) sum = detail::add_unchecked(backend_, sum, multiple(i, k[i]));
    if (is_ambient_torsion(sum)) {
      throw ValidationError("free generators are dependent: k = [" + join(k) + "] gives the torsion point " +
                            sum.str());
    }
  }
}

void check_coords(const GroupShape& shape, const Coords& c) {
  if (c.free.size() != shape.rank) {
    throw InputError("coords have " + std::to_string(c.free.size()) + " free entries, group rank is " +
                     std::to_string(shape.rank));
  }
  if (c.tors.size() != shape.torsion.size()) {
    throw InputError("coords have " + std::to_string(c.tors.size()) + " torsion entries, expected " +
                     std::to_string(shape.torsion.size()));
  }
  for (std::size_t j = 0; j < c.tors.size(); ++j) {
    if (c.tors[j] < 0 || c.tors[j] >= shape.torsion[j]) {
      throw InputError("torsion residue " + std::to_string(c.tors[j]) + " outside [0, " +
                       std::to_string(shape.torsion[j]) + ")");
    }
  }
}

GroupPoint realize(const GammaSpec& gamma, const Coords& c) {
  check_coords(gamma.shape(), c);
  GroupPoint acc = gamma.torsion_point(c.tors);
  for (std::size_t i = 0; i < c.free.size(); ++i) {
    if (c.free[i] != 0) acc = detail::add_unchecked(gamma.backend(), acc, gamma.multiple(i, c.free[i]));
  }
  return acc;
}

std::vector<GroupPoint> realize_tuple(const GammaSpec& gamma, const Tuple& t) {
  std::vector<GroupPoint> points;
  points.reserve(t.size());
  for (const Coords& c : t) points.push_back(realize(gamma, c));
  return points;
}

bool box_order_less(std::span<const long> a, std::span<const long> b) {
  long na = 0;
  long nb = 0;
  for (long v : a) na = std::max(na, v < 0 ? -v : v);
  for (long v : b) nb = std::max(nb, v < 0 ? -v : v);
  if (na != nb) return na < nb;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] != b[i]) return zigzag(a[i]) < zigzag(b[i]);
  }
  return a.size() < b.size();
}

std::vector<std::vector<long>> ordered_box(std::size_t dim, long bound, double ceiling) {
  if (bound < 0) throw InputError("coefficient bound must be non-negative");
  const double size = box_size(dim, bound);
  if (size > ceiling) {
    throw ResourceError("coefficient box of " + std::to_string(static_cast<long long>(size)) +
                            " vectors exceeds the size ceiling",
                        size);
  }
  std::vector<std::vector<long>> out;
  out.reserve(static_cast<std::size_t>(size));
  std::vector<long> v(dim, -bound);
  for (;;) {
    out.push_back(v);
    bool wrapped = true;
    for (std::size_t i = dim; i-- > 0;) {
      if (v[i] < bound) {
        ++v[i];
        wrapped = false;
        break;
      }
      v[i] = -bound;
    }
    if (wrapped) break;
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return box_order_less(a, b); });
  return out;
}

std::variant<Coords, Undecided> decompose(const GammaSpec& gamma, const GroupPoint& raw, long bound) {
  const GroupBackend& backend = gamma.backend();
  if (!on_variety(backend, raw)) throw InputError("point " + raw.str() + " is not on " + backend.str());
  const GroupPoint p = normalize(backend, raw);
  const std::size_t torsion_count = static_cast<std::size_t>(gamma.torsion_order());
  const auto box = ordered_box(gamma.rank(), bound);
  for (std::size_t t = 0; t < torsion_count; ++t) {
    const std::vector<long> res = gamma.torsion_residues(t);
    const GroupPoint target = detail::add_unchecked(backend, p, negate(backend, gamma.torsion_point(res)));
    for (const auto& free : box) {
      GroupPoint sum = GroupPoint::identity();
      for (std::size_t i = 0; i < free.size(); ++i) {
        if (free[i] != 0) sum = detail::add_unchecked(backend, sum, gamma.multiple(i, free[i]));
      }
      if (sum == target) return Coords{free, res};
    }
  }
  return Undecided{bound};
}

std::optional<Coords> divisible_in_gamma(const GammaSpec& gamma, const Coords& c, long n) {
  if (n < 1) throw InputError("divisor must be at least 1");
  check_coords(gamma.shape(), c);
  Coords q;
  for (long v : c.free) {
    if (v % n != 0) return std::nullopt;
    q.free.push_back(v / n);
  }
  const auto& factors = gamma.torsion().invariant_factors;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    std::optional<long> solution;
    for (long t = 0; t < factors[j] && !solution; ++t) {
      if (mod_floor(n * t, factors[j]) == c.tors[j]) solution = t;
    }
    if (!solution) return std::nullopt;
    q.tors.push_back(*solution);
  }
  return q;
}

std::optional<Coords> divisible_in_gamma(const GammaSpec& gamma, const GroupPoint& p, long n, long bound) {
  const auto d = decompose(gamma, p, bound);
  if (const auto* u = std::get_if<Undecided>(&d)) {
    throw InputError("point " + p.str() + " does not decompose within bound " + std::to_string(u->bound));
  }
  return divisible_in_gamma(gamma, std::get<Coords>(d), n);
}

std::string GammaQuotient::str() const {
  if (invariant_factors.empty()) return "trivial";
  std::string s;
  for (std::size_t i = 0; i < invariant_factors.size(); ++i) s += (i ? " x Z/" : "Z/") + std::to_string(invariant_factors[i]);
  return s;
}

std::vector<long> reduce_coords(const GroupShape& shape, long l, const Coords& c) {
  check_coords(shape, c);
  const auto moduli = shape.component_moduli(l);
  std::vector<long> r;
  r.reserve(moduli.size());
  for (std::size_t i = 0; i < c.free.size(); ++i) r.push_back(mod_floor(c.free[i], moduli[i]));
  for (std::size_t j = 0; j < c.tors.size(); ++j) r.push_back(mod_floor(c.tors[j], moduli[shape.rank + j]));
  return r;
}

GammaQuotient gamma_mod(const GammaSpec& gamma, long l, double ceiling) {
  if (l < 1) throw InputError("quotient exponent must be at least 1");
  const GroupShape shape = gamma.shape();
  GammaQuotient q;
  q.modulus = l;
  q.component_moduli = shape.component_moduli(l);
  double size = 1;
  for (long m : q.component_moduli) size *= static_cast<double>(m);
  if (size > ceiling) {
    throw ResourceError("quotient of order " + std::to_string(static_cast<long long>(size)) +
                            " exceeds the size ceiling",
                        size);
  }
  q.order = static_cast<std::size_t>(size);

  IntMatrix diag(q.component_moduli.size(), q.component_moduli.size());
  for (std::size_t i = 0; i < q.component_moduli.size(); ++i) diag.at(i, i) = q.component_moduli[i];
  for (const Integer& d : smith_normal_form(diag).diagonal()) {
    if (d > 1) q.invariant_factors.push_back(d.get_si());
  }

  std::vector<long> digits(q.component_moduli.size(), 0);
  for (std::size_t idx = 0; idx < q.order; ++idx) {
    Coords c;
    c.free.assign(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(shape.rank));
    c.tors.assign(digits.begin() + static_cast<std::ptrdiff_t>(shape.rank), digits.end());
    q.transversal.push_back(std::move(c));
    for (std::size_t i = digits.size(); i-- > 0;) {
      if (++digits[i] < q.component_moduli[i]) break;
      digits[i] = 0;
    }
  }
  return q;
}

DependenceResult linear_dependence(const GammaSpec& gamma, std::span<const GroupPoint> points, long bound) {
  DependenceResult result;
  result.bound = bound;
  const std::size_t r = gamma.rank();
  const std::size_t m = points.size();
  IntMatrix coords(r, m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto d = decompose(gamma, points[j], bound);
    if (std::holds_alternative<Undecided>(d)) {
      result.status = DependenceResult::Status::kUndecided;
      result.undecided_index = j;
      return result;
    }
    const Coords& c = std::get<Coords>(d);
    for (std::size_t i = 0; i < r; ++i) coords.at(i, j) = c.free[i];
  }
  const std::vector<IntVector> kernel = integer_kernel(coords);
  if (kernel.empty()) return result;

  auto max_norm = [](const IntVector& v) {
    Integer n = 0;
    for (const Integer& x : v) n = std::max(n, Integer(abs(x)));
    return n;
  };
  const IntVector* shortest = &kernel.front();
  for (const IntVector& v : kernel) {
    if (max_norm(v) < max_norm(*shortest)) shortest = &v;
  }
  std::vector<long> best;
  for (const Integer& x : *shortest) best.push_back(x.get_si());

  if (kernel.size() > 1) {
    // Several independent relations: search the box up to the shortest basis
    // norm for a shorter combination.
    const long limit = max_norm(*shortest).get_si();
    if (box_size(m, limit) <= kDefaultSizeCeiling) {
      for (const auto& k : ordered_box(m, limit)) {
        if (std::all_of(k.begin(), k.end(), [](long v) { return v == 0; })) continue;
        IntVector kv(k.begin(), k.end());
        const IntVector image = coords.apply(kv);
        if (std::all_of(image.begin(), image.end(), [](const Integer& v) { return v == 0; })) {
          best = k;
          break;
        }
      }
    }
  }
  result.status = DependenceResult::Status::kDependent;
  result.k = std::move(best);
  return result;
}

GammaBox::GammaBox(const GammaSpec& gamma, long bound, double ceiling)
    : gamma_(&gamma), bound_(bound), torsion_count_(static_cast<std::size_t>(gamma.torsion_order())) {
  if (bound < 0) throw InputError("coefficient bound must be non-negative");
  const double size = box_size(gamma.rank(), bound) * static_cast<double>(torsion_count_);
  if (size > ceiling) {
    throw ResourceError("box of " + std::to_string(static_cast<long long>(size)) + " group elements exceeds the size ceiling",
                        size);
  }
  const std::size_t r = gamma.rank();
  std::vector<long> free(r, -bound);
  const std::size_t free_count = static_cast<std::size_t>(box_size(r, bound));
  coords_.reserve(free_count * torsion_count_);
  points_.reserve(free_count * torsion_count_);
  for (std::size_t f = 0; f < free_count; ++f) {
    GroupPoint base = GroupPoint::identity();
    for (std::size_t i = 0; i < r; ++i) {
      if (free[i] != 0) base = detail::add_unchecked(gamma.backend(), base, gamma.multiple(i, free[i]));
    }
    for (std::size_t t = 0; t < torsion_count_; ++t) {
      Coords c{free, gamma.torsion_residues(t)};
      points_.push_back(detail::add_unchecked(gamma.backend(), base, gamma.torsion_point(c.tors)));
      coords_.push_back(std::move(c));
    }
    for (std::size_t i = r; i-- > 0;) {
      if (++free[i] <= bound) break;
      free[i] = -bound;
    }
  }
}

std::size_t GammaBox::index_of(const Coords& c) const {
  check_coords(gamma_->shape(), c);
  std::size_t idx = 0;
  for (long v : c.free) {
    if (v < -bound_ || v > bound_) throw InputError("coords outside the coefficient box");
    idx = idx * static_cast<std::size_t>(2 * bound_ + 1) + static_cast<std::size_t>(v + bound_);
  }
  std::size_t t = 0;
  const auto& factors = gamma_->torsion().invariant_factors;
  for (std::size_t j = 0; j < factors.size(); ++j) t = t * static_cast<std::size_t>(factors[j]) + static_cast<std::size_t>(c.tors[j]);
  return idx * torsion_count_ + t;
}

void GammaBox::for_each_tuple(std::size_t n, const std::function<bool(std::span<const std::size_t>)>& visit,
                              double ceiling) const {
  const std::size_t r = gamma_->rank();
  const double total = box_size(r * n, bound_) * std::pow(static_cast<double>(torsion_count_), static_cast<double>(n));
  if (total > ceiling) {
    throw ResourceError("enumeration of " + std::to_string(static_cast<long long>(total)) +
                            " tuples exceeds the size ceiling",
                        total);
  }
  const auto free_vectors = ordered_box(r * n, bound_, ceiling);
  std::vector<std::size_t> slots(n);
  std::vector<std::size_t> tors(n, 0);
  const std::size_t width = static_cast<std::size_t>(2 * bound_ + 1);
  for (const auto& fv : free_vectors) {
    std::vector<std::size_t> free_index(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < r; ++i) free_index[j] = free_index[j] * width + static_cast<std::size_t>(fv[j * r + i] + bound_);
    }
    std::fill(tors.begin(), tors.end(), 0);
    for (;;) {
      for (std::size_t j = 0; j < n; ++j) slots[j] = free_index[j] * torsion_count_ + tors[j];
      if (!visit(slots)) return;
      bool wrapped = true;
      for (std::size_t j = n; j-- > 0;) {
        if (++tors[j] < torsion_count_) {
          wrapped = false;
          break;
        }
        tors[j] = 0;
      }
      if (wrapped) break;
    }
  }
}

Rational Histogram::edge(std::size_t i) const {
  return lo + (hi - lo) * Rational(static_cast<long>(i)) / Rational(static_cast<long>(counts.size()));
}

long Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0L); }

std::optional<std::size_t> Histogram::bin_of(const Rational& x) const {
  if (x < lo || x > hi || counts.empty()) return std::nullopt;
  if (x == hi) return counts.size() - 1;
  const Rational scaled = (x - lo) / (hi - lo) * Rational(static_cast<long>(counts.size()));
  Integer idx;
  mpz_fdiv_q(idx.get_mpz_t(), scaled.numerator().get_mpz_t(), scaled.denominator().get_mpz_t());
  return std::min<std::size_t>(idx.get_ui(), counts.size() - 1);
}

Histogram projection_density(const GammaSpec& gamma, const Rational& lo, const Rational& hi, long height_bound,
                             long bins, long coeff_bound) {
  if (!(lo < hi)) throw InputError("density interval needs lo < hi");
  if (bins < 1) throw InputError("bins must be at least 1");
  Histogram h{lo, hi, std::vector<long>(static_cast<std::size_t>(bins), 0)};
  const GammaBox box(gamma, coeff_bound);
  for (std::size_t i = 0; i < box.size(); ++i) {
    const GroupPoint& p = box.point(i);
    if (p.is_identity() || naive_height(p) > height_bound) continue;
    if (const auto bin = h.bin_of(p.x())) ++h.counts[*bin];
  }
  return h;
}

namespace {

// Rational map of the identity component's x-range onto a bounded interval.
struct ComponentChart {
  Rational lo;
  Rational hi;
  bool compactify = false;

  Rational coordinate(const Rational& x) const {
    return compactify ? x / (Rational(1) + x.abs()) : x;
  }
};

ComponentChart identity_component_chart(const GroupBackend& backend) {
  if (!backend.is_curve()) return {Rational(-1), Rational(1), false};
  const Rational root_lo = largest_root_bracket(backend, 8).first;
  ComponentChart chart{Rational(), Rational(1), true};
  chart.lo = chart.coordinate(root_lo);
  return chart;
}

bool in_multiple_subgroup(const GroupShape& shape, const Coords& c, long n) {
  for (long v : c.free) {
    if (v % n != 0) return false;
  }
  for (std::size_t j = 0; j < c.tors.size(); ++j) {
    if (c.tors[j] % std::gcd(n, shape.torsion[j]) != 0) return false;
  }
  return true;
}

}  // namespace

AxiomReport check_axioms_bounded(const GammaSpec& gamma, const AxiomCheckOptions& options,
                                 std::span<const GroupPoint> enumerated) {
  if (options.n_max < 1 || options.grid < 1 || options.height_bound < 1) {
    throw InputError("axiom check bounds must be positive");
  }
  const GroupBackend& backend = gamma.backend();
  const GroupShape shape = gamma.shape();
  AxiomReport report;
  report.finite_group = gamma.rank() == 0;
  report.ml_note = "Mordell-Lang conditions are verified per polynomial with 'ml verify'";

  const GammaBox box(gamma, options.coeff_bound);
  const ComponentChart chart = identity_component_chart(backend);
  Histogram cells{chart.lo, chart.hi, std::vector<long>(static_cast<std::size_t>(options.grid), 0)};

  for (long n = 1; n <= options.n_max; ++n) {
    AxiomRow row;
    row.n = n;
    row.cells = options.grid;
    std::vector<bool> hit(static_cast<std::size_t>(options.grid), false);
    for (std::size_t i = 0; i < box.size(); ++i) {
      const GroupPoint& p = box.point(i);
      if (p.is_identity() || naive_height(p) > options.height_bound) continue;
      if (!in_multiple_subgroup(shape, box.coords(i), n) || !component_of(backend, p)) continue;
      ++row.points_sampled;
      if (const auto bin = cells.bin_of(chart.coordinate(p.x()))) hit[*bin] = true;
    }
    row.cells_hit = static_cast<long>(std::count(hit.begin(), hit.end(), true));

    for (const GroupPoint& q : enumerated) {
      const GroupPoint nq = detail::scalar_mul_unchecked(backend, n, q);
      const auto nq_coords = decompose(gamma, nq, options.coeff_bound);
      if (!std::holds_alternative<Coords>(nq_coords)) continue;
      ++row.purity_checked;
      if (std::holds_alternative<Undecided>(decompose(gamma, q, options.coeff_bound))) {
        row.violations.push_back({q, nq, std::get<Coords>(nq_coords)});
      }
    }
    row.quotient = gamma_mod(gamma, n);
    report.rows.push_back(std::move(row));
  }
  const AxiomRow& first = report.rows.front();
  report.low_coverage = report.finite_group || 2 * first.cells_hit < first.cells;
  return report;
}

AxiomReport check_axioms_bounded(const GammaSpec& gamma, const AxiomCheckOptions& options) {
  const auto points = enumerate_rational_points(gamma.backend(), options.height_bound);
  return check_axioms_bounded(gamma, options, points);
}

}  // namespace mlkit
