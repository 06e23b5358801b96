#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mlkit/coset.hpp"
#include "mlkit/gamma.hpp"
#include "mlkit/multipoly.hpp"

namespace mlkit {

// Identity convention: the identity has no affine coordinates. A tuple with
// the identity in slot j is evaluated only when p does not mention slot j's
// variables (x(2j-1), x(2j)); otherwise it is skipped and reported.

struct SolutionSet {
  long bound = 0;
  std::vector<Tuple> solutions;  // canonical tuple order
  std::vector<Tuple> skipped;
};

// Tuples of Gamma^n with free coefficients in [-B, B] whose realization is
// a zero of p. p must have arity 2n.
SolutionSet solutions_bounded(const GammaSpec& gamma, const MultiPoly& p, std::size_t n, long bound,
                              double ceiling = kDefaultSizeCeiling);

// p evaluated at the tuple's coordinates, or nullopt when the tuple is
// skipped by the identity convention.
std::optional<Rational> eval_at_tuple(const MultiPoly& p, std::span<const GroupPoint> points);

// A claimed decomposition: the union of base + ker(chi_k) over its pairs.
using MLDecomposition = std::vector<KernelCoset>;

std::string decomposition_str(const MLDecomposition& d);

struct Verdict {
  enum class Kind { kVerified, kCounterexample, kInconclusive };
  enum class Direction { kMissingFromUnion, kNotASolution };

  Kind kind = Kind::kVerified;
  long bound = 0;
  // Counterexample data.
  Direction direction = Direction::kMissingFromUnion;
  Tuple witness;
  std::vector<GroupPoint> witness_points;
  // Inconclusive data.
  std::string reason;
  std::vector<Tuple> unexplained;
  // Tuples skipped by the identity convention during the scan.
  std::size_t skipped = 0;

  bool verified() const { return kind == Kind::kVerified; }
  // "verified(bound=5)", "counterexample: missing-from-union ((3, 5), (3, -5))",
  // "inconclusive: ..."
  std::string str() const;
};

const char* direction_name(Verdict::Direction d);

// Checks both inclusions over the coefficient box: every solution satisfies
// chi_k(t) = chi_k(base) for some pair, and every tuple satisfying one of the
// character equations is a solution. The first failure in canonical tuple
// order is returned.
Verdict verify_decomposition(const GammaSpec& gamma, const MultiPoly& p, std::size_t n, const MLDecomposition& d,
                             long bound, double ceiling = kDefaultSizeCeiling);

struct Suggestion {
  MLDecomposition decomposition;  // empty unless verdict is verified
  Verdict verdict;
};

// Greedy search for a decomposition explaining every solution in the box;
// the result is returned only when verify_decomposition accepts it.
Suggestion suggest_decomposition(const GammaSpec& gamma, const MultiPoly& p, std::size_t n, long bound,
                                 double ceiling = kDefaultSizeCeiling);

}  // namespace mlkit
