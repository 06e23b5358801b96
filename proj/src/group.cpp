#include "mlkit/group.hpp"

#include <algorithm>
#include <numeric>
#include <cctype>
#include <climits>
#include <map>

#include "mlkit/errors.hpp"

namespace mlkit {

Rational GroupBackend::discriminant_term() const {
  if (kind_ == Kind::kCircle) return Rational();
  return Rational(4) * a_.pow(3) + Rational(27) * b_.pow(2);
}

std::string GroupBackend::fingerprint() const {
  if (kind_ == Kind::kCircle) return "circle";
  return "curve:" + a_.str() + ":" + b_.str();
}

std::string GroupBackend::str() const {
  if (kind_ == Kind::kCircle) return "x^2 + y^2 = 1";
  std::string s = "y^2 = x^3";
  if (!a_.is_zero()) s += (a_.sign() < 0 ? " - " : " + ") + (a_.abs() == Rational(1) ? std::string() : a_.abs().str() + "*") + "x";
  if (!b_.is_zero()) s += (b_.sign() < 0 ? " - " : " + ") + b_.abs().str();
  return s;
}

void validate(const GroupBackend& backend) {
  if (backend.is_curve() && backend.discriminant_term().is_zero()) {
    throw ValidationError("singular curve: 4a^3+27b^2 = 0 for a = " + backend.a().str() +
                          ", b = " + backend.b().str());
  }
}

std::string GroupPoint::str() const {
  if (identity_) return "O";
  return "(" + x_.str() + ", " + y_.str() + ")";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

GroupPoint GroupPoint::parse(std::string_view text) {
  const std::string_view t = trim(text);
  if (t == "O") return identity();
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') {
    throw InputError("malformed point '" + std::string(text) + "', expected \"(x, y)\" or \"O\"");
  }
  const std::string_view inner = t.substr(1, t.size() - 2);
  const auto comma = inner.find(',');
  if (comma == std::string_view::npos || inner.find(',', comma + 1) != std::string_view::npos) {
    throw InputError("malformed point '" + std::string(text) + "'");
  }
  return affine(Rational::parse(trim(inner.substr(0, comma))), Rational::parse(trim(inner.substr(comma + 1))));
}

std::size_t GroupPoint::hash() const {
  if (identity_) return 0x51ed27;
  const std::size_t h = x_.hash();
  return h ^ (y_.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

bool point_order_less(const GroupPoint& p, const GroupPoint& q) {
  const Integer hp = naive_height(p);
  const Integer hq = naive_height(q);
  if (hp != hq) return hp < hq;
  if (p.is_identity() != q.is_identity()) return p.is_identity();
  if (p.x() != q.x()) return p.x() < q.x();
  return p.y() < q.y();
}

Rational defining_residual(const GroupBackend& backend, const Rational& x, const Rational& y) {
  if (backend.is_curve()) return y * y - (x * x * x + backend.a() * x + backend.b());
  return x * x + y * y - Rational(1);
}

bool on_variety(const GroupBackend& backend, const GroupPoint& p) {
  return p.is_identity() || defining_residual(backend, p.x(), p.y()).is_zero();
}

GroupPoint normalize(const GroupBackend& backend, const GroupPoint& p) {
  if (!backend.is_curve() && !p.is_identity() && p.x() == Rational(1) && p.y().is_zero()) {
    return GroupPoint::identity();
  }
  return p;
}

GroupPoint negate(const GroupBackend& backend, const GroupPoint& p) {
  (void)backend;
  if (p.is_identity()) return p;
  return GroupPoint::affine(p.x(), -p.y());
}

namespace detail {

GroupPoint add_unchecked(const GroupBackend& backend, const GroupPoint& p, const GroupPoint& q) {
  if (p.is_identity()) return q;
  if (q.is_identity()) return p;
  if (!backend.is_curve()) {
    return normalize(backend, GroupPoint::affine(p.x() * q.x() - p.y() * q.y(), p.x() * q.y() + q.x() * p.y()));
  }
  Rational slope;
  if (p.x() == q.x()) {
    if (p.y() == -q.y()) return GroupPoint::identity();
    slope = (Rational(3) * p.x() * p.x() + backend.a()) / (Rational(2) * p.y());
  } else {
    slope = (q.y() - p.y()) / (q.x() - p.x());
  }
  Rational x3 = slope * slope - p.x() - q.x();
  Rational y3 = slope * (p.x() - x3) - p.y();
  return GroupPoint::affine(std::move(x3), std::move(y3));
}

GroupPoint scalar_mul_unchecked(const GroupBackend& backend, long k, const GroupPoint& p) {
  GroupPoint base = k < 0 ? negate(backend, p) : p;
  unsigned long n = k < 0 ? 0UL - static_cast<unsigned long>(k) : static_cast<unsigned long>(k);
  GroupPoint acc = GroupPoint::identity();
  while (n > 0) {
    if (n & 1UL) acc = add_unchecked(backend, acc, base);
    n >>= 1;
    if (n > 0) base = add_unchecked(backend, base, base);
  }
  return acc;
}

}  // namespace detail

GroupPoint add(const GroupBackend& backend, const GroupPoint& p, const GroupPoint& q) {
  if (!on_variety(backend, p)) throw InputError("point " + p.str() + " is not on " + backend.str());
  if (!on_variety(backend, q)) throw InputError("point " + q.str() + " is not on " + backend.str());
  return detail::add_unchecked(backend, normalize(backend, p), normalize(backend, q));
}

GroupPoint scalar_mul(const GroupBackend& backend, long k, const GroupPoint& p) {
  if (!on_variety(backend, p)) throw InputError("point " + p.str() + " is not on " + backend.str());
  return detail::scalar_mul_unchecked(backend, k, normalize(backend, p));
}

Integer naive_height(const GroupPoint& p) {
  if (p.is_identity()) return 0;
  Integer num = abs(p.x().numerator());
  Integer den = p.x().denominator();
  return num > den ? num : den;
}

std::vector<GroupPoint> enumerate_rational_points(const GroupBackend& backend, long height_bound) {
  if (height_bound < 1) throw InputError("height bound must be at least 1");
  std::vector<GroupPoint> points{GroupPoint::identity()};
  for (long v = 1; v <= height_bound; ++v) {
    const long u_max = backend.is_curve() ? height_bound : v;
    for (long u = -u_max; u <= u_max; ++u) {
      if (std::gcd(u < 0 ? -u : u, v) != 1) continue;
      const Rational x{Integer(u), Integer(v)};
      const Rational rhs = backend.is_curve() ? x * x * x + backend.a() * x + backend.b() : Rational(1) - x * x;
      Rational y;
      if (!rational_sqrt(rhs, y)) continue;
      const GroupPoint p = normalize(backend, GroupPoint::affine(x, y));
      if (p.is_identity()) continue;
      points.push_back(p);
      if (!y.is_zero()) points.push_back(GroupPoint::affine(x, -y));
    }
  }
  std::sort(points.begin(), points.end(), point_order_less);
  return points;
}

int real_components(const GroupBackend& backend) {
  if (!backend.is_curve()) return 1;
  return backend.discriminant_term().sign() < 0 ? 2 : 1;
}

namespace {

Rational cubic(const GroupBackend& backend, const Rational& t) {
  return t * t * t + backend.a() * t + backend.b();
}

Rational cauchy_bound(const GroupBackend& backend) {
  return Rational(1) + std::max(backend.a().abs(), backend.b().abs());
}

}  // namespace

Rational oval_separator(const GroupBackend& backend) {
  if (real_components(backend) != 2) throw InputError("oval separator needs a curve with two real components");
  // f < 0 exactly on (-inf, r1) u (r2, r3), and r1 < 0, so any t >= 0 with
  // f(t) < 0 separates the oval from the unbounded branch. Bisect towards the
  // local minimum sqrt(-a/3), where f is negative.
  Rational lo(0);
  Rational hi = cauchy_bound(backend);
  if (cubic(backend, lo).sign() < 0) return lo;
  for (int iter = 0; iter < 4096; ++iter) {
    const Rational mid = (lo + hi) / Rational(2);
    if (cubic(backend, mid).sign() < 0) return mid;
    if ((Rational(3) * mid * mid + backend.a()).sign() < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw std::logic_error("oval separator bisection did not converge");
}

std::pair<Rational, Rational> largest_root_bracket(const GroupBackend& backend, unsigned bits) {
  if (!backend.is_curve()) throw InputError("largest root is defined for curves only");
  Rational hi = cauchy_bound(backend);
  Rational lo = real_components(backend) == 2 ? oval_separator(backend) : -hi;
  const Rational width = Rational(Integer(1), Integer(1) << bits);
  // On [lo, inf) the cubic changes sign exactly once.
  while (hi - lo > width) {
    const Rational mid = (lo + hi) / Rational(2);
    if (cubic(backend, mid).sign() > 0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi};
}

bool component_of(const GroupBackend& backend, const GroupPoint& p) {
  if (p.is_identity() || real_components(backend) == 1) return true;
  return p.x() > oval_separator(backend);
}

std::optional<long> point_order(const GroupBackend& backend, const GroupPoint& p, long max_order) {
  GroupPoint q = normalize(backend, p);
  const GroupPoint step = q;
  for (long k = 1; k <= max_order; ++k) {
    if (q.is_identity()) return k;
    q = detail::add_unchecked(backend, q, step);
  }
  return std::nullopt;
}

long TorsionGroup::order() const {
  long n = 1;
  for (long d : invariant_factors) n *= d;
  return n;
}

std::string TorsionGroup::str() const {
  if (invariant_factors.empty()) return "trivial";
  std::string s;
  for (std::size_t i = 0; i < invariant_factors.size(); ++i) {
    if (i > 0) s += " x ";
    s += "Z/" + std::to_string(invariant_factors[i]);
  }
  return s;
}

namespace {

// Preferred generator among equals: small height, small x, positive y.
bool generator_preference(const GroupPoint& p, const GroupPoint& q) {
  const Integer hp = naive_height(p);
  const Integer hq = naive_height(q);
  if (hp != hq) return hp < hq;
  if (p.x() != q.x()) return p.x() < q.x();
  return p.y() > q.y();
}

}  // namespace

TorsionGroup structure_of_finite_subgroup(const GroupBackend& backend, std::vector<GroupPoint> elements) {
  const long size = static_cast<long>(elements.size());
  std::sort(elements.begin(), elements.end(), generator_preference);
  std::vector<long> orders;
  orders.reserve(elements.size());
  for (const GroupPoint& e : elements) {
    const auto ord = point_order(backend, e, size);
    if (!ord) throw std::logic_error("element of finite subgroup has order above the group size");
    orders.push_back(*ord);
  }
  TorsionGroup group;
  const auto max_it = std::max_element(orders.begin(), orders.end());
  const long m = max_it == orders.end() ? 1 : *max_it;
  if (m == 1) return group;
  const GroupPoint g1 = elements[static_cast<std::size_t>(max_it - orders.begin())];
  if (m == size) {
    group.invariant_factors = {m};
    group.generators = {g1};
    return group;
  }
  std::vector<GroupPoint> cyclic;
  GroupPoint acc = GroupPoint::identity();
  for (long k = 0; k < m; ++k) {
    cyclic.push_back(acc);
    acc = detail::add_unchecked(backend, acc, g1);
  }
  const long d2 = size / m;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (orders[i] != d2) continue;
    bool independent = true;
    GroupPoint multiple = elements[i];
    for (long k = 1; k < d2 && independent; ++k) {
      if (std::find(cyclic.begin(), cyclic.end(), multiple) != cyclic.end()) independent = false;
      multiple = detail::add_unchecked(backend, multiple, elements[i]);
    }
    if (independent) {
      group.invariant_factors = {d2, m};
      group.generators = {elements[i], g1};
      return group;
    }
  }
  throw std::logic_error("finite subgroup is not a product of two cyclic groups");
}

namespace {

std::map<Integer, unsigned> factor_integer(Integer n) {
  std::map<Integer, unsigned> factors;
  if (n < 0) n = -n;
  if (n <= 1) return factors;
  for (unsigned long p = 2; p < 10'000'000UL; ++p) {
    if (Integer(p) * Integer(p) > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ++factors[Integer(p)];
      n /= p;
    }
  }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) > 0) {
      ++factors[n];
    } else if (mpz_perfect_square_p(n.get_mpz_t())) {
      Integer r;
      mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
      factors[r] += 2;
    } else {
      throw ValidationError("cannot factor discriminant " + n.get_str() + " by trial division");
    }
  }
  return factors;
}

unsigned valuation(Integer n, const Integer& p) {
  unsigned v = 0;
  while (n != 0 && mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
    n /= p;
    ++v;
  }
  return v;
}

// Smallest u > 0 with a*u^4 and b*u^6 integral.
Integer integral_scale(const Rational& a, const Rational& b) {
  Integer u = 1;
  const Integer den = lcm(a.denominator(), b.denominator());
  for (const auto& [p, e] : factor_integer(den)) {
    (void)e;
    const unsigned va = valuation(a.denominator(), p);
    const unsigned vb = valuation(b.denominator(), p);
    const unsigned need = std::max((va + 3) / 4, (vb + 5) / 6);
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), need);
    u *= pe;
  }
  return u;
}

Integer eval_cubic(const Integer& x, const Integer& a, const Integer& c) { return x * x * x + a * x + c; }

// Zero of a monotone cubic on the integer range [lo, hi], if any.
std::optional<Integer> monotone_integer_root(const Integer& a, const Integer& c, Integer lo, Integer hi, bool increasing) {
  while (lo <= hi) {
    Integer mid;
    mpz_fdiv_q_ui(mid.get_mpz_t(), Integer(lo + hi).get_mpz_t(), 2);
    const Integer v = eval_cubic(mid, a, c);
    if (v == 0) return mid;
    if ((v < 0) == increasing) {
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  return std::nullopt;
}

// Integer roots of X^3 + aX + c.
std::vector<Integer> integer_roots(const Integer& a, const Integer& c) {
  Integer bound = 1 + (abs(a) > abs(c) ? abs(a) : abs(c));
  std::vector<Integer> roots;
  auto push = [&](const std::optional<Integer>& r) {
    if (r && std::find(roots.begin(), roots.end(), *r) == roots.end()) roots.push_back(*r);
  };
  if (a >= 0) {
    push(monotone_integer_root(a, c, -bound, bound, true));
  } else {
    Integer q;
    mpz_fdiv_q_ui(q.get_mpz_t(), Integer(-a).get_mpz_t(), 3);
    Integer cf;
    mpz_sqrt(cf.get_mpz_t(), q.get_mpz_t());
    push(monotone_integer_root(a, c, -bound, -cf - 1, true));
    push(monotone_integer_root(a, c, -cf, cf, false));
    push(monotone_integer_root(a, c, cf + 1, bound, true));
  }
  return roots;
}

}  // namespace

std::vector<GroupPoint> torsion_points(const GroupBackend& backend) {
  validate(backend);
  std::vector<GroupPoint> points{GroupPoint::identity()};
  if (!backend.is_curve()) {
    points.push_back(GroupPoint::affine(Rational(-1), Rational(0)));
    points.push_back(GroupPoint::affine(Rational(0), Rational(-1)));
    points.push_back(GroupPoint::affine(Rational(0), Rational(1)));
    std::sort(points.begin(), points.end(), point_order_less);
    return points;
  }
  // Nagell-Lutz on the integral model Y^2 = X^3 + A X + B with x = X/u^2,
  // y = Y/u^3: torsion points are integral with Y = 0 or Y^2 | 4A^3+27B^2.
  const Integer u = integral_scale(backend.a(), backend.b());
  const Integer u2 = u * u;
  const Integer u3 = u2 * u;
  const Rational big_a_r = backend.a() * Rational(Integer(u2 * u2));
  const Rational big_b_r = backend.b() * Rational(Integer(u3 * u3));
  const Integer big_a = big_a_r.numerator();
  const Integer big_b = big_b_r.numerator();
  const Integer disc = 4 * big_a * big_a * big_a + 27 * big_b * big_b;

  std::vector<Integer> ys{Integer(0)};
  {
    std::vector<Integer> square_divisors{Integer(1)};
    for (const auto& [p, e] : factor_integer(disc)) {
      std::vector<Integer> next;
      for (const Integer& d : square_divisors) {
        Integer pk = 1;
        for (unsigned k = 0; k <= e / 2; ++k) {
          next.push_back(d * pk);
          pk *= p;
        }
      }
      square_divisors = std::move(next);
    }
    ys.insert(ys.end(), square_divisors.begin(), square_divisors.end());
  }
  for (const Integer& y : ys) {
    for (const Integer& x : integer_roots(big_a, big_b - y * y)) {
      for (int sign : {1, -1}) {
        if (y == 0 && sign < 0) continue;
        const GroupPoint p = GroupPoint::affine(Rational(x, u2), Rational(sign * y, u3));
        if (point_order(backend, p, 12)) points.push_back(p);
      }
    }
  }
  std::sort(points.begin(), points.end(), point_order_less);
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

TorsionGroup torsion_subgroup(const GroupBackend& backend) {
  return structure_of_finite_subgroup(backend, torsion_points(backend));
}

}  // namespace mlkit
