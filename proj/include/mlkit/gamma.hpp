#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mlkit/group.hpp"

namespace mlkit {

inline constexpr long kDefaultCoeffBound = 16;
inline constexpr long kDefaultAuditBound = 8;
inline constexpr double kDefaultSizeCeiling = 1e6;

// Coordinates of a point of Gamma = Z^r (+) T: integer coefficients on the
// free generators plus one residue per torsion invariant factor.
struct Coords {
  std::vector<long> free;
  std::vector<long> tors;

  // "free=[2] tors=[]"
  std::string str() const;

  friend bool operator==(const Coords&, const Coords&) = default;
  friend auto operator<=>(const Coords&, const Coords&) = default;
};

// A point of Gamma^n, one Coords per slot.
using Tuple = std::vector<Coords>;
std::string tuple_str(const Tuple& t);

// Membership in Gamma is only semi-decided by bounded search.
struct Undecided {
  long bound;
};

// Rank and torsion invariant factors of Gamma; enough to do quotient arithmetic.
struct GroupShape {
  std::size_t rank = 0;
  std::vector<long> torsion;

  // Moduli of the coordinates of Gamma / l Gamma: l for each free
  // coordinate, gcd(l, d) for each torsion factor d.
  std::vector<long> component_moduli(long l) const;
  std::size_t slot_width() const { return rank + torsion.size(); }

  friend bool operator==(const GroupShape&, const GroupShape&) = default;
};

// A finitely generated subgroup of the backend's rational points, given by
// trusted generators. Generators of finite order form the torsion part; the
// rest are free generators, audited for independence up to a bound.
class GammaSpec {
 public:
  static GammaSpec from_generators(const GroupBackend& backend, const std::vector<GroupPoint>& generators,
                                   std::optional<std::size_t> claimed_rank = std::nullopt,
                                   long audit_bound = kDefaultAuditBound);

  const GroupBackend& backend() const { return backend_; }
  const std::vector<GroupPoint>& free_generators() const { return free_; }
  const TorsionGroup& torsion() const { return torsion_; }
  std::size_t rank() const { return free_.size(); }
  GroupShape shape() const { return {rank(), torsion_.invariant_factors}; }
  long audit_bound() const { return audit_bound_; }
  long torsion_order() const { return torsion_.order(); }

  // m * free_generators()[gen]; memoized, safe to call concurrently.
  const GroupPoint& multiple(std::size_t gen, long m) const;
  // Torsion element with the given residues (0 <= r_i < d_i).
  const GroupPoint& torsion_point(std::span<const long> residues) const;
  // Residue vector of the i-th torsion element in mixed-radix order.
  std::vector<long> torsion_residues(std::size_t index) const;
  // True when p is a torsion point of the ambient group.
  bool is_ambient_torsion(const GroupPoint& p) const;

 private:
  struct Cache;

  GammaSpec(GroupBackend backend, std::vector<GroupPoint> free, TorsionGroup torsion,
            std::vector<GroupPoint> ambient_torsion, long audit_bound);
  void audit_independence() const;

  GroupBackend backend_;
  std::vector<GroupPoint> free_;
  TorsionGroup torsion_;
  std::vector<GroupPoint> torsion_elements_;
  std::vector<GroupPoint> ambient_torsion_;
  long audit_bound_;
  std::shared_ptr<Cache> cache_;
};

// Throws InputError when the coordinates do not fit the shape.
void check_coords(const GroupShape& shape, const Coords& c);

GroupPoint realize(const GammaSpec& gamma, const Coords& c);
std::vector<GroupPoint> realize_tuple(const GammaSpec& gamma, const Tuple& t);

// All integer vectors in [-bound, bound]^dim, ordered by max-norm and then
// lexicographically with 0 < 1 < -1 < 2 < -2 < ... in each position.
std::vector<std::vector<long>> ordered_box(std::size_t dim, long bound, double ceiling = kDefaultSizeCeiling);
bool box_order_less(std::span<const long> a, std::span<const long> b);

// Inverse of realize by bounded search over free coefficients in [-B, B].
std::variant<Coords, Undecided> decompose(const GammaSpec& gamma, const GroupPoint& p, long bound = kDefaultCoeffBound);

// Coordinates of some q in Gamma with n*q equal to the point with coordinates
// c, or nullopt when no such q exists in Gamma.
std::optional<Coords> divisible_in_gamma(const GammaSpec& gamma, const Coords& c, long n);
// Point form; throws InputError when p does not decompose within the bound.
std::optional<Coords> divisible_in_gamma(const GammaSpec& gamma, const GroupPoint& p, long n,
                                         long bound = kDefaultCoeffBound);

struct GammaQuotient {
  long modulus = 1;
  std::vector<long> component_moduli;
  std::vector<long> invariant_factors;  // Smith form of the quotient, 1s dropped
  std::size_t order = 1;
  std::vector<Coords> transversal;      // representatives in Gamma, one per class

  std::string str() const;  // "Z/4", "trivial", "Z/2 x Z/2"
};

GammaQuotient gamma_mod(const GammaSpec& gamma, long l, double ceiling = kDefaultSizeCeiling);

// Residue of Coords modulo l Gamma.
std::vector<long> reduce_coords(const GroupShape& shape, long l, const Coords& c);

struct DependenceResult {
  enum class Status { kDependent, kIndependent, kUndecided };
  Status status = Status::kIndependent;
  std::vector<long> k;               // set when dependent
  std::size_t undecided_index = 0;   // set when undecided
  long bound = 0;
};

// Shortest (max-norm) nonzero k with sum k_i p_i in the torsion subgroup.
DependenceResult linear_dependence(const GammaSpec& gamma, std::span<const GroupPoint> points,
                                   long bound = kDefaultCoeffBound);

// Every element of Gamma with free coefficients in [-B, B], realized once.
// Entry index = mixed radix over (free digit c + B, ..., torsion index).
class GammaBox {
 public:
  GammaBox(const GammaSpec& gamma, long bound, double ceiling = kDefaultSizeCeiling);

  long bound() const { return bound_; }
  std::size_t size() const { return coords_.size(); }
  const Coords& coords(std::size_t i) const { return coords_[i]; }
  const GroupPoint& point(std::size_t i) const { return points_[i]; }
  std::size_t index_of(const Coords& c) const;

  // Visits Gamma^n tuples of box entries in canonical order: the full free
  // coefficient vector by ordered_box, then torsion residues lexicographically.
  // The visitor returns false to stop early.
  void for_each_tuple(std::size_t n, const std::function<bool(std::span<const std::size_t>)>& visit,
                      double ceiling = kDefaultSizeCeiling) const;

 private:
  const GammaSpec* gamma_;
  long bound_;
  std::size_t torsion_count_;
  std::vector<Coords> coords_;
  std::vector<GroupPoint> points_;
};

struct Histogram {
  Rational lo;
  Rational hi;
  std::vector<long> counts;

  Rational edge(std::size_t i) const;
  long total() const;
  // Bin index for x in [lo, hi] (hi falls in the last bin), or nullopt.
  std::optional<std::size_t> bin_of(const Rational& x) const;
};

// x-coordinates of Gamma points with free coefficients in [-B, B] and naive
// height <= height_bound, binned over [lo, hi].
Histogram projection_density(const GammaSpec& gamma, const Rational& lo, const Rational& hi, long height_bound,
                             long bins, long coeff_bound = kDefaultCoeffBound);

struct AxiomCheckOptions {
  long n_max = 3;
  long height_bound = 100;
  long grid = 16;
  long coeff_bound = kDefaultCoeffBound;
};

struct PurityViolation {
  GroupPoint q;
  GroupPoint nq;
  Coords nq_coords;
};

struct AxiomRow {
  long n = 1;
  // Density evidence for n*Gamma on the identity component.
  long cells = 0;
  long cells_hit = 0;
  std::size_t points_sampled = 0;
  // Purity spot check.
  std::size_t purity_checked = 0;
  std::vector<PurityViolation> violations;
  // |Gamma / n Gamma|.
  GammaQuotient quotient;
};

struct AxiomReport {
  bool finite_group = false;
  bool low_coverage = false;
  std::vector<AxiomRow> rows;
  std::string ml_note;
};

// Bounded evidence for density, purity, quotient sizes. enumerated must be the
// backend's rational points of height <= options.height_bound.
AxiomReport check_axioms_bounded(const GammaSpec& gamma, const AxiomCheckOptions& options,
                                 std::span<const GroupPoint> enumerated);
AxiomReport check_axioms_bounded(const GammaSpec& gamma, const AxiomCheckOptions& options);

}  // namespace mlkit
