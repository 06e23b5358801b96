#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlkit/rational.hpp"

namespace mlkit {

// The ambient one-dimensional group: a Weierstrass curve y^2 = x^3 + ax + b
// or the unit circle x^2 + y^2 = 1.
class GroupBackend {
 public:
  enum class Kind { kCurve, kCircle };

  // Not validated; call validate() before using the group law.
  static GroupBackend curve(Rational a, Rational b) { return GroupBackend(Kind::kCurve, std::move(a), std::move(b)); }
  static GroupBackend circle() { return GroupBackend(Kind::kCircle, Rational(), Rational()); }

  Kind kind() const { return kind_; }
  bool is_curve() const { return kind_ == Kind::kCurve; }
  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }

  // 4a^3 + 27b^2 (zero for the circle).
  Rational discriminant_term() const;

  // Canonical text key: "curve:a:b" or "circle".
  std::string fingerprint() const;
  std::string str() const;

  friend bool operator==(const GroupBackend&, const GroupBackend&) = default;

 private:
  GroupBackend(Kind kind, Rational a, Rational b) : kind_(kind), a_(std::move(a)), b_(std::move(b)) {}

  Kind kind_;
  Rational a_;
  Rational b_;
};

// Throws ValidationError for a singular curve.
void validate(const GroupBackend& backend);

// Either the abstract identity or an affine point. On the circle the affine
// point (1, 0) is always normalized to the identity.
class GroupPoint {
 public:
  GroupPoint() = default;  // identity
  static GroupPoint identity() { return GroupPoint(); }
  static GroupPoint affine(Rational x, Rational y) { return GroupPoint(std::move(x), std::move(y)); }

  bool is_identity() const { return identity_; }
  const Rational& x() const { return x_; }
  const Rational& y() const { return y_; }

  // "O" or "(x, y)".
  std::string str() const;
  // Inverse of str(); whitespace is flexible.
  static GroupPoint parse(std::string_view text);

  friend bool operator==(const GroupPoint&, const GroupPoint&) = default;

  std::size_t hash() const;

 private:
  GroupPoint(Rational x, Rational y) : identity_(false), x_(std::move(x)), y_(std::move(y)) {}

  bool identity_ = true;
  Rational x_;
  Rational y_;
};

// Enumeration order: height, then x, then y.
bool point_order_less(const GroupPoint& p, const GroupPoint& q);

// Evaluates the defining polynomial at (x, y): y^2 - (x^3+ax+b) or x^2+y^2-1.
Rational defining_residual(const GroupBackend& backend, const Rational& x, const Rational& y);
bool on_variety(const GroupBackend& backend, const GroupPoint& p);
GroupPoint normalize(const GroupBackend& backend, const GroupPoint& p);

GroupPoint negate(const GroupBackend& backend, const GroupPoint& p);
// Checks both inputs lie on the variety.
GroupPoint add(const GroupBackend& backend, const GroupPoint& p, const GroupPoint& q);
GroupPoint scalar_mul(const GroupBackend& backend, long k, const GroupPoint& p);

namespace detail {
// Group law without the on-variety checks; inputs must already be valid.
GroupPoint add_unchecked(const GroupBackend& backend, const GroupPoint& p, const GroupPoint& q);
GroupPoint scalar_mul_unchecked(const GroupBackend& backend, long k, const GroupPoint& p);
}  // namespace detail

// max(|num|, den) of the x-coordinate; 0 for the identity.
Integer naive_height(const GroupPoint& p);

// All points with x = u/v, |u| <= N, 1 <= v <= N, plus the identity, in
// point_order_less order.
std::vector<GroupPoint> enumerate_rational_points(const GroupBackend& backend, long height_bound);

// Number of connected components of the real locus (1 or 2).
int real_components(const GroupBackend& backend);

// A rational t in (r2, r3) for a curve with three real roots r1 < r2 < r3.
Rational oval_separator(const GroupBackend& backend);

// Rational bracket [lo, hi] of width <= 2^-bits around the largest real root
// of x^3 + ax + b.
std::pair<Rational, Rational> largest_root_bracket(const GroupBackend& backend, unsigned bits);

// True iff p lies in the connected component of the identity.
bool component_of(const GroupBackend& backend, const GroupPoint& p);

// Order of p if it is at most max_order, otherwise nullopt.
std::optional<long> point_order(const GroupBackend& backend, const GroupPoint& p, long max_order);

struct TorsionGroup {
  std::vector<long> invariant_factors;  // d1 | d2 | ..., each > 1
  std::vector<GroupPoint> generators;   // generators[i] has order invariant_factors[i]

  long order() const;
  // "trivial", "Z/6", "Z/2 x Z/4".
  std::string str() const;
};

// Structure of a finite subgroup given by its complete element list.
TorsionGroup structure_of_finite_subgroup(const GroupBackend& backend, std::vector<GroupPoint> elements);

// All rational torsion points of the backend, in enumeration order.
std::vector<GroupPoint> torsion_points(const GroupBackend& backend);
TorsionGroup torsion_subgroup(const GroupBackend& backend);

}  // namespace mlkit

template <>
struct std::hash<mlkit::GroupPoint> {
  std::size_t operator()(const mlkit::GroupPoint& p) const { return p.hash(); }
};
