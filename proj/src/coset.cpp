#include "mlkit/coset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <numeric>

#include "mlkit/errors.hpp"

namespace mlkit {

namespace {

long mod_floor(long a, long m) {
  const long r = a % m;
  return r < 0 ? r + m : r;
}

long mod_floor(const Integer& a, long m) {
  return static_cast<long>(mpz_fdiv_ui(a.get_mpz_t(), static_cast<unsigned long>(m)));
}

std::vector<long> tuple_moduli(const GroupShape& shape, std::size_t n, long l) {
  const auto slot = shape.component_moduli(l);
  std::vector<long> m;
  m.reserve(slot.size() * n);
  for (std::size_t j = 0; j < n; ++j) m.insert(m.end(), slot.begin(), slot.end());
  return m;
}

double product(const std::vector<long>& moduli) {
  double p = 1;
  for (long m : moduli) p *= static_cast<double>(m);
  return p;
}

void check_ceiling(double size, double ceiling) {
  if (size > ceiling) {
    throw ResourceError("quotient enumeration of " + std::to_string(static_cast<long long>(size)) +
                            " residues exceeds the size ceiling",
                        size);
  }
}

void check_character(std::span<const long> k, std::size_t n) {
  if (k.size() != n) {
    throw InputError("character has " + std::to_string(k.size()) + " entries, arity is " + std::to_string(n));
  }
}

void check_same_space(const CosetUnion& a, const CosetUnion& b) {
  if (a.arity() != b.arity()) throw InputError("coset unions have different arities");
  if (!(a.shape() == b.shape())) throw InputError("coset unions live in different groups");
}

std::string join(std::span<const long> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

CosetUnion::CosetUnion(GroupShape shape, std::size_t n, long modulus, std::set<Residue> residues)
    : shape_(std::move(shape)), n_(n), modulus_(modulus), residues_(std::move(residues)) {
  if (n_ == 0) throw InputError("coset union arity must be at least 1");
  if (modulus_ < 1) throw InputError("modulus must be at least 1");
  const auto moduli = tuple_moduli(shape_, n_, modulus_);
  for (const Residue& r : residues_) {
    if (r.size() != moduli.size()) throw InputError("residue has the wrong length");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] < 0 || r[i] >= moduli[i]) throw InputError("residue digit out of range");
    }
  }
}

CosetUnion CosetUnion::full(const GroupShape& shape, std::size_t n, long modulus, double ceiling) {
  const auto all = enumerate_quotient(shape, n, modulus, ceiling);
  return {shape, n, modulus, std::set<Residue>(all.begin(), all.end())};
}

Tuple CosetUnion::representative(const Residue& r) const {
  const std::size_t w = shape_.slot_width();
  Tuple t(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    t[j].free.assign(r.begin() + static_cast<std::ptrdiff_t>(j * w),
                     r.begin() + static_cast<std::ptrdiff_t>(j * w + shape_.rank));
    t[j].tors.assign(r.begin() + static_cast<std::ptrdiff_t>(j * w + shape_.rank),
                     r.begin() + static_cast<std::ptrdiff_t>((j + 1) * w));
  }
  return t;
}

std::string CosetUnion::str() const {
  const std::size_t w = shape_.slot_width();
  std::string s = "mod " + std::to_string(modulus_) + ": {";
  bool first = true;
  for (const Residue& r : residues_) {
    if (!first) s += ", ";
    first = false;
    if (n_ > 1) s += "(";
    for (std::size_t j = 0; j < n_; ++j) {
      const std::span<const long> slot(r.data() + j * w, w);
      if (j) s += ", ";
      s += "[" + join(slot.first(shape_.rank));
      if (!shape_.torsion.empty()) s += "; " + join(slot.subspan(shape_.rank));
      s += "]";
    }
    if (n_ > 1) s += ")";
  }
  return s + "}";
}

namespace {

class UnionReader {
 public:
  explicit UnionReader(std::string_view text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
    }
  }

  bool eat(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  void expect(std::string_view word) {
    if (s_.compare(pos_, word.size(), word) != 0) fail("expected '" + std::string(word) + "'");
    pos_ += word.size();
  }
  bool at_end() const { return pos_ == s_.size(); }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  long number() {
    const std::size_t start = pos_;
    if (peek() == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string tok = s_.substr(start, pos_ - start);
    if (tok.empty() || tok == "-" || tok.size() > 18) fail("expected an integer");
    return std::stol(tok);
  }

  // Comma-separated integers up to (not including) one of the stop chars.
  std::vector<long> numbers(std::string_view stops) {
    std::vector<long> v;
    if (stops.find(peek()) != std::string_view::npos) return v;
    v.push_back(number());
    while (eat(',')) v.push_back(number());
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("coset union text: " + what + " at offset " + std::to_string(pos_));
  }

 private:
  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

CosetUnion CosetUnion::parse(std::string_view text, const GroupShape& shape, std::size_t n) {
  UnionReader in(text);
  in.expect("mod");
  const long modulus = in.number();
  if (modulus < 1) in.fail("modulus must be at least 1");
  in.expect(':');
  in.expect('{');
  const auto slot_moduli = shape.component_moduli(modulus);
  std::set<Residue> residues;
  auto read_slot = [&](Residue& out) {
    in.expect('[');
    std::vector<long> free = in.numbers(";]");
    std::vector<long> tors;
    if (in.eat(';')) tors = in.numbers("]");
    in.expect(']');
    if (free.size() != shape.rank || tors.size() != shape.torsion.size()) in.fail("slot does not match the group shape");
    for (std::size_t i = 0; i < free.size(); ++i) out.push_back(mod_floor(free[i], slot_moduli[i]));
    for (std::size_t i = 0; i < tors.size(); ++i) out.push_back(mod_floor(tors[i], slot_moduli[shape.rank + i]));
  };
  if (!in.eat('}')) {
    do {
      Residue r;
      if (n > 1) {
        in.expect('(');
        for (std::size_t j = 0; j < n; ++j) {
          if (j) in.expect(',');
          read_slot(r);
        }
        in.expect(')');
      } else {
        read_slot(r);
      }
      residues.insert(std::move(r));
    } while (in.eat(','));
    in.expect('}');
  }
  if (!in.at_end()) in.fail("unexpected trailing text");
  return {shape, n, modulus, std::move(residues)};
}

std::vector<CosetUnion::Residue> enumerate_quotient(const GroupShape& shape, std::size_t n, long l, double ceiling) {
  if (l < 1) throw InputError("modulus must be at least 1");
  const auto moduli = tuple_moduli(shape, n, l);
  check_ceiling(product(moduli), ceiling);
  std::vector<CosetUnion::Residue> out;
  CosetUnion::Residue digits(moduli.size(), 0);
  for (;;) {
    out.push_back(digits);
    bool wrapped = true;
    for (std::size_t i = digits.size(); i-- > 0;) {
      if (++digits[i] < moduli[i]) {
        wrapped = false;
        break;
      }
      digits[i] = 0;
    }
    if (wrapped) break;
  }
  return out;
}

CosetUnion::Residue reduce_tuple(const GroupShape& shape, long l, const Tuple& t) {
  CosetUnion::Residue r;
  r.reserve(t.size() * shape.slot_width());
  for (const Coords& c : t) {
    const auto slot = reduce_coords(shape, l, c);
    r.insert(r.end(), slot.begin(), slot.end());
  }
  return r;
}

Coords character_value(const GroupShape& shape, std::span<const long> k, const Tuple& t) {
  check_character(k, t.size());
  Coords sum{std::vector<long>(shape.rank, 0), std::vector<long>(shape.torsion.size(), 0)};
  for (std::size_t j = 0; j < t.size(); ++j) {
    check_coords(shape, t[j]);
    for (std::size_t i = 0; i < shape.rank; ++i) sum.free[i] += k[j] * t[j].free[i];
    for (std::size_t i = 0; i < shape.torsion.size(); ++i) {
      sum.tors[i] = mod_floor(sum.tors[i] + mod_floor(k[j], shape.torsion[i]) * t[j].tors[i], shape.torsion[i]);
    }
  }
  return sum;
}

GroupPoint character_value(const GroupBackend& backend, std::span<const long> k, std::span<const GroupPoint> points) {
  check_character(k, points.size());
  GroupPoint sum = GroupPoint::identity();
  for (std::size_t j = 0; j < points.size(); ++j) sum = add(backend, sum, scalar_mul(backend, k[j], points[j]));
  return sum;
}

KernelDesc kernel_lattice(const GammaSpec& gamma, std::span<const long> k, double ceiling) {
  const GroupShape shape = gamma.shape();
  const std::size_t n = k.size();
  if (n == 0) throw InputError("character must have at least one entry");
  const std::size_t r = shape.rank;
  KernelDesc desc;
  desc.n = n;

  // Free part: r equations sum_j k_j v[j*r+i] = 0 in r*n unknowns.
  IntMatrix m(r, r * n);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < n; ++j) m.at(i, j * r + i) = k[j];
  }
  desc.free_basis = integer_kernel(m);

  // Torsion part: enumerate T^n.
  const std::size_t t = shape.torsion.size();
  if (t > 0) {
    std::vector<long> moduli;
    for (std::size_t j = 0; j < n; ++j) moduli.insert(moduli.end(), shape.torsion.begin(), shape.torsion.end());
    check_ceiling(product(moduli), ceiling);
    std::vector<long> digits(moduli.size(), 0);
    for (;;) {
      bool zero = true;
      for (std::size_t i = 0; i < t && zero; ++i) {
        long s = 0;
        for (std::size_t j = 0; j < n; ++j) s = mod_floor(s + mod_floor(k[j], shape.torsion[i]) * digits[j * t + i], shape.torsion[i]);
        zero = s == 0;
      }
      if (zero) desc.torsion_solutions.push_back(digits);
      bool wrapped = true;
      for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < moduli[i]) {
          wrapped = false;
          break;
        }
        digits[i] = 0;
      }
      if (wrapped) break;
    }
  } else {
    desc.torsion_solutions.emplace_back();
  }
  return desc;
}

CosetUnion dke(const GroupShape& shape, std::span<const long> k, long e, double ceiling) {
  const std::size_t n = k.size();
  if (n == 0) throw InputError("character must have at least one entry");
  if (e < 1) throw InputError("e must be at least 1");
  const auto slot = shape.component_moduli(e);
  const std::size_t w = slot.size();
  std::set<CosetUnion::Residue> kept;
  for (auto& v : enumerate_quotient(shape, n, e, ceiling)) {
    bool zero = true;
    for (std::size_t i = 0; i < w && zero; ++i) {
      long s = 0;
      for (std::size_t j = 0; j < n; ++j) s = mod_floor(s + mod_floor(k[j], slot[i]) * v[j * w + i], slot[i]);
      zero = s == 0;
    }
    if (zero) kept.insert(std::move(v));
  }
  return {shape, n, e, std::move(kept)};
}

CosetUnion dke(const GammaSpec& gamma, std::span<const long> k, long e, double ceiling) {
  return dke(gamma.shape(), k, e, ceiling);
}

CosetUnion rescale(const CosetUnion& u, long l, double ceiling) {
  if (l < 1 || l % u.modulus() != 0) {
    throw InputError("cannot rescale modulus " + std::to_string(u.modulus()) + " to " + std::to_string(l));
  }
  if (l == u.modulus()) return u;
  std::set<CosetUnion::Residue> kept;
  if (!u.residues().empty()) {
    const auto old_moduli = tuple_moduli(u.shape(), u.arity(), u.modulus());
    CosetUnion::Residue reduced(old_moduli.size());
    for (auto& v : enumerate_quotient(u.shape(), u.arity(), l, ceiling)) {
      for (std::size_t i = 0; i < v.size(); ++i) reduced[i] = v[i] % old_moduli[i];
      if (u.contains(reduced)) kept.insert(std::move(v));
    }
  }
  return {u.shape(), u.arity(), l, std::move(kept)};
}

namespace {

template <typename Op>
CosetUnion combine(const CosetUnion& a, const CosetUnion& b, double ceiling, Op op) {
  check_same_space(a, b);
  const long l = std::lcm(a.modulus(), b.modulus());
  const CosetUnion ra = rescale(a, l, ceiling);
  const CosetUnion rb = rescale(b, l, ceiling);
  std::set<CosetUnion::Residue> out;
  op(ra.residues(), rb.residues(), std::inserter(out, out.end()));
  return {a.shape(), a.arity(), l, std::move(out)};
}

}  // namespace

CosetUnion unite(const CosetUnion& a, const CosetUnion& b, double ceiling) {
  return combine(a, b, ceiling, [](const auto& x, const auto& y, auto out) {
    std::set_union(x.begin(), x.end(), y.begin(), y.end(), out);
  });
}

CosetUnion intersect(const CosetUnion& a, const CosetUnion& b, double ceiling) {
  return combine(a, b, ceiling, [](const auto& x, const auto& y, auto out) {
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), out);
  });
}

CosetUnion difference(const CosetUnion& a, const CosetUnion& b, double ceiling) {
  return combine(a, b, ceiling, [](const auto& x, const auto& y, auto out) {
    std::set_difference(x.begin(), x.end(), y.begin(), y.end(), out);
  });
}

CosetUnion complement(const CosetUnion& u, double ceiling) {
  return difference(CosetUnion::full(u.shape(), u.arity(), u.modulus(), ceiling), u, ceiling);
}

std::string Decision::str() const {
  switch (value) {
    case Value::kTrue: return "true";
    case Value::kFalse: return "false";
    case Value::kUndecided: break;
  }
  return "undecided(bound=" + std::to_string(bound) + ")";
}

Decision member(const GammaSpec& gamma, const CosetUnion& u, std::span<const GroupPoint> tuple, long bound) {
  if (tuple.size() != u.arity()) {
    throw InputError("tuple has " + std::to_string(tuple.size()) + " points, union arity is " +
                     std::to_string(u.arity()));
  }
  if (!(gamma.shape() == u.shape())) throw InputError("coset union belongs to a different group");
  Tuple coords;
  for (const GroupPoint& p : tuple) {
    auto d = decompose(gamma, p, bound);
    if (const auto* und = std::get_if<Undecided>(&d)) return Decision::undecided(und->bound);
    coords.push_back(std::move(std::get<Coords>(d)));
  }
  return Decision::of(u.contains(reduce_tuple(u.shape(), u.modulus(), coords)));
}

KernelCosetImage from_kernel_cosets(const GammaSpec& gamma, std::span<const KernelCoset> pairs, std::size_t n, long l,
                                    double ceiling) {
  if (l < 1) throw InputError("modulus must be at least 1");
  const GroupShape shape = gamma.shape();
  const std::size_t r = shape.rank;
  const std::size_t w = shape.slot_width();
  const auto moduli = tuple_moduli(shape, n, l);
  check_ceiling(product(moduli), ceiling);

  KernelCosetImage image{CosetUnion::empty(shape, n, l), false};
  std::set<CosetUnion::Residue> all;
  for (const KernelCoset& pair : pairs) {
    check_character(pair.k, n);
    if (pair.base.size() != n) throw InputError("kernel coset base has the wrong arity");
    for (long kj : pair.k) {
      if (kj == 0) continue;
      if (r > 0) image.coarsened = true;
      for (long d : shape.torsion) {
        if ((kj * l) % d != 0) image.coarsened = true;
      }
    }

    // Images of the kernel generators in (Gamma / l Gamma)^n.
    const KernelDesc kernel = kernel_lattice(gamma, pair.k, ceiling);
    std::vector<CosetUnion::Residue> gens;
    for (const IntVector& v : kernel.free_basis) {
      CosetUnion::Residue g(moduli.size(), 0);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < r; ++i) g[j * w + i] = mod_floor(v[j * r + i], l);
      }
      gens.push_back(std::move(g));
    }
    const std::size_t t = shape.torsion.size();
    for (const auto& tau : kernel.torsion_solutions) {
      if (tau.empty()) continue;
      CosetUnion::Residue g(moduli.size(), 0);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < t; ++i) g[j * w + r + i] = mod_floor(tau[j * t + i], moduli[j * w + r + i]);
      }
      gens.push_back(std::move(g));
    }

    // Subgroup closure, then shift by the base residue.
    std::set<CosetUnion::Residue> subgroup{CosetUnion::Residue(moduli.size(), 0)};
    std::deque<CosetUnion::Residue> queue(subgroup.begin(), subgroup.end());
    while (!queue.empty()) {
      const CosetUnion::Residue cur = std::move(queue.front());
      queue.pop_front();
      for (const auto& g : gens) {
        CosetUnion::Residue next(cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i) next[i] = (cur[i] + g[i]) % moduli[i];
        if (subgroup.insert(next).second) queue.push_back(std::move(next));
      }
    }
    const CosetUnion::Residue base = reduce_tuple(shape, l, pair.base);
    for (const auto& s : subgroup) {
      CosetUnion::Residue shifted(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) shifted[i] = (s[i] + base[i]) % moduli[i];
      all.insert(std::move(shifted));
    }
  }
  image.cosets = CosetUnion(shape, n, l, std::move(all));
  return image;
}

Decision induced_member(const GammaSpec& gamma, const FormulaNode& qf, const CosetUnion& u,
                        std::span<const GroupPoint> tuple, long bound) {
  if (qf.has_blocks()) throw InputError("induced sets need a quantifier-free formula");
  if (tuple.size() != u.arity()) throw InputError("tuple arity does not match the coset union");
  std::vector<Rational> values;
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    const GroupPoint& p = tuple[j];
    if (p.is_identity()) {
      const bool used = [&] {
        std::vector<const FormulaNode*> stack{&qf};
        while (!stack.empty()) {
          const FormulaNode* node = stack.back();
          stack.pop_back();
          if (node->kind == FormulaNode::Kind::kAtom) {
            for (std::size_t v : {2 * j, 2 * j + 1}) {
              if (v < node->lhs.arity() && (node->lhs.uses_variable(v) || node->rhs.uses_variable(v))) return true;
            }
          }
          for (const auto& c : node->children) stack.push_back(&c);
        }
        return false;
      }();
      if (used) return Decision::of(false);
      values.emplace_back();
      values.emplace_back();
    } else {
      values.push_back(p.x());
      values.push_back(p.y());
    }
  }
  if (!eval_qf(qf, values)) return Decision::of(false);
  return member(gamma, u, tuple, bound);
}

Histogram density_sample(const GammaSpec& gamma, const CosetUnion& u, const Rational& lo, const Rational& hi,
                         long height_bound, long bins, long coeff_bound) {
  if (u.arity() != 1) throw InputError("density sampling is only supported for n = 1");
  if (!(lo < hi)) throw InputError("density interval needs lo < hi");
  if (bins < 1) throw InputError("bins must be at least 1");
  Histogram h{lo, hi, std::vector<long>(static_cast<std::size_t>(bins), 0)};
  const GammaBox box(gamma, coeff_bound);
  for (std::size_t i = 0; i < box.size(); ++i) {
    const GroupPoint& p = box.point(i);
    if (p.is_identity() || naive_height(p) > height_bound) continue;
    if (!u.contains(reduce_coords(u.shape(), u.modulus(), box.coords(i)))) continue;
    if (const auto bin = h.bin_of(p.x())) ++h.counts[*bin];
  }
  return h;
}

}  // namespace mlkit
