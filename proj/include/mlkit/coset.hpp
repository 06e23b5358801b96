#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlkit/formula.hpp"
#include "mlkit/gamma.hpp"
#include "mlkit/smith.hpp"

namespace mlkit {

// A union of cosets of (l Gamma)^n inside Gamma^n. Each residue is the
// concatenation over slots of the slot's quotient coordinates (free
// components mod l, then torsion components mod gcd(l, d)).
class CosetUnion {
 public:
  using Residue = std::vector<long>;

  CosetUnion(GroupShape shape, std::size_t n, long modulus, std::set<Residue> residues = {});

  static CosetUnion empty(const GroupShape& shape, std::size_t n, long modulus) { return {shape, n, modulus}; }
  static CosetUnion full(const GroupShape& shape, std::size_t n, long modulus,
                         double ceiling = kDefaultSizeCeiling);

  const GroupShape& shape() const { return shape_; }
  std::size_t arity() const { return n_; }
  long modulus() const { return modulus_; }
  const std::set<Residue>& residues() const { return residues_; }
  std::size_t size() const { return residues_.size(); }
  bool contains(const Residue& r) const { return residues_.count(r) != 0; }

  // The residue's canonical representative in Gamma^n (quotient digits used
  // as coordinates).
  Tuple representative(const Residue& r) const;

  // "mod 4: {[0], [2]}"; slots with torsion render as "[free; tors]", and
  // tuples with n > 1 as "([..], [..])".
  std::string str() const;
  static CosetUnion parse(std::string_view text, const GroupShape& shape, std::size_t n);

  friend bool operator==(const CosetUnion&, const CosetUnion&) = default;

 private:
  GroupShape shape_;
  std::size_t n_;
  long modulus_;
  std::set<Residue> residues_;
};

// Every element of (Gamma / l Gamma)^n, in increasing residue order.
std::vector<CosetUnion::Residue> enumerate_quotient(const GroupShape& shape, std::size_t n, long l,
                                                    double ceiling = kDefaultSizeCeiling);

// Residue of a Gamma^n tuple modulo (l Gamma)^n.
CosetUnion::Residue reduce_tuple(const GroupShape& shape, long l, const Tuple& t);

// chi_k(t) = sum k_j t_j in Gamma coordinates (torsion residues reduced).
Coords character_value(const GroupShape& shape, std::span<const long> k, const Tuple& t);
// Same map evaluated with the group law on points.
GroupPoint character_value(const GroupBackend& backend, std::span<const long> k, std::span<const GroupPoint> points);

// Exact description of ker(chi_k) in Gamma^n.
struct KernelDesc {
  std::size_t n = 0;
  // Basis (Hermite form) of {v in Z^(rn) : sum_j k_j v_j = 0}; v is laid out
  // slot by slot, r free coordinates each.
  std::vector<IntVector> free_basis;
  // All torsion parts (slot by slot) with sum_j k_j tau_j = 0.
  std::vector<std::vector<long>> torsion_solutions;
};

KernelDesc kernel_lattice(const GammaSpec& gamma, std::span<const long> k, double ceiling = kDefaultSizeCeiling);

// chi_k^{-1}(e Gamma), as residues modulo (e Gamma)^n.
CosetUnion dke(const GammaSpec& gamma, std::span<const long> k, long e, double ceiling = kDefaultSizeCeiling);
CosetUnion dke(const GroupShape& shape, std::span<const long> k, long e, double ceiling = kDefaultSizeCeiling);

// Same point set at a multiple of the modulus.
CosetUnion rescale(const CosetUnion& u, long l, double ceiling = kDefaultSizeCeiling);

CosetUnion unite(const CosetUnion& a, const CosetUnion& b, double ceiling = kDefaultSizeCeiling);
CosetUnion intersect(const CosetUnion& a, const CosetUnion& b, double ceiling = kDefaultSizeCeiling);
CosetUnion difference(const CosetUnion& a, const CosetUnion& b, double ceiling = kDefaultSizeCeiling);
// Relative to Gamma^n.
CosetUnion complement(const CosetUnion& u, double ceiling = kDefaultSizeCeiling);

struct Decision {
  enum class Value { kFalse, kTrue, kUndecided };
  Value value = Value::kFalse;
  long bound = 0;

  static Decision of(bool b) { return {b ? Value::kTrue : Value::kFalse, 0}; }
  static Decision undecided(long bound) { return {Value::kUndecided, bound}; }
  bool is_true() const { return value == Value::kTrue; }
  bool is_false() const { return value == Value::kFalse; }
  bool is_undecided() const { return value == Value::kUndecided; }
  // "true", "false", "undecided(bound=B)"
  std::string str() const;
};

Decision member(const GammaSpec& gamma, const CosetUnion& u, std::span<const GroupPoint> tuple,
                long bound = kDefaultCoeffBound);

struct KernelCosetImage {
  CosetUnion cosets;
  // True when some kernel has infinite index modulo l, i.e. the finite
  // modulus image is strictly larger than the kernel coset itself.
  bool coarsened = false;
};

struct KernelCoset {
  Tuple base;
  std::vector<long> k;
};

// Union of base + (ker chi_k) reduced modulo (l Gamma)^n.
KernelCosetImage from_kernel_cosets(const GammaSpec& gamma, std::span<const KernelCoset> pairs, std::size_t n, long l,
                                    double ceiling = kDefaultSizeCeiling);

// Block-free formula over the 2n coordinates of the tuple, conjoined with
// membership in u. A tuple with the identity in a slot whose coordinates the
// formula mentions is not in the induced set.
Decision induced_member(const GammaSpec& gamma, const FormulaNode& qf, const CosetUnion& u,
                        std::span<const GroupPoint> tuple, long bound = kDefaultCoeffBound);

// x-projections of box elements of Gamma (free coefficients in [-B, B]) that
// lie in u and have height at most height_bound. Only n = 1 is supported.
Histogram density_sample(const GammaSpec& gamma, const CosetUnion& u, const Rational& lo, const Rational& hi,
                         long height_bound, long bins, long coeff_bound = kDefaultCoeffBound);

}  // namespace mlkit
