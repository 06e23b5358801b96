#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlkit/gamma.hpp"
#include "mlkit/multipoly.hpp"

namespace mlkit {

enum class Relation { kEq, kLt, kLe };

// One node of a formula tree. Atoms compare two polynomials; a block binds
// n points of Gamma to y1..y2n (point j has coordinates y(2j-1), y(2j)).
//
// Variable convention: with s free variables, polynomials outside blocks
// have arity s (x1..xs); polynomials inside a block of size n have arity
// s + 2n, with y1..y2n stored after the x's.
struct FormulaNode {
  enum class Kind { kAtom, kNot, kAnd, kOr, kBlock };

  Kind kind = Kind::kAtom;
  Relation relation = Relation::kEq;
  MultiPoly lhs;
  MultiPoly rhs;
  std::size_t block_size = 0;
  std::vector<FormulaNode> children;

  static FormulaNode atom(Relation rel, MultiPoly lhs, MultiPoly rhs);
  static FormulaNode negation(FormulaNode f);
  static FormulaNode conjunction(std::vector<FormulaNode> fs);
  static FormulaNode disjunction(std::vector<FormulaNode> fs);
  static FormulaNode block(std::size_t n, FormulaNode body);

  bool has_blocks() const;
  const FormulaNode& body() const { return children.front(); }

  friend bool operator==(const FormulaNode&, const FormulaNode&) = default;
};

// A boolean combination of blocks and quantifier-free formulas in x1..xs.
class Formula {
 public:
  Formula(std::size_t free_arity, FormulaNode root);

  std::size_t free_arity() const { return free_arity_; }
  const FormulaNode& root() const { return root_; }

  // Canonical S-expression; parse(str()) == *this.
  std::string str() const;

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  std::size_t free_arity_;
  FormulaNode root_;
};

// Grammar:
//   formula := qf | block | (not formula) | (and formula+) | (or formula+)
//   block   := (exists-gamma INT qf)
//   qf      := (= poly poly) | (< poly poly) | (<= poly poly)
//            | (and qf+) | (or qf+) | (not qf)
//   poly    := RATIONAL | VAR | (+ poly+) | (* poly+) | (- poly poly) | (^ poly POSINT)
// The free arity is max(min_free_arity, largest x index used).
Formula parse_formula(std::string_view text, std::size_t min_free_arity = 0);
// S-expression form of a single polynomial in x1..x(arity).
MultiPoly parse_polynomial(std::string_view text, std::size_t min_arity = 0);
std::string poly_sexpr(const MultiPoly& p, std::size_t free_arity);

// Exact two-valued semantics of a block-free node. The assignment must
// cover the node's variables; extra trailing values are ignored.
bool eval_qf(const FormulaNode& node, std::span<const Rational> assignment);
bool eval_qf(const Formula& f, std::span<const Rational> assignment);

struct Witness {
  std::size_t block_id = 0;  // preorder index of the block in the formula
  Tuple coords;
  std::vector<GroupPoint> points;
};

// Kleene truth value. True carries witnesses for the blocks that made it
// true; Unknown carries the search bound that was exhausted.
struct TriBool {
  enum class Value { kFalse, kUnknown, kTrue };

  Value value = Value::kFalse;
  std::vector<Witness> witnesses;
  long bound = 0;

  static TriBool make_true(std::vector<Witness> w = {}) { return {Value::kTrue, std::move(w), 0}; }
  static TriBool make_false() { return {Value::kFalse, {}, 0}; }
  static TriBool make_unknown(long bound) { return {Value::kUnknown, {}, bound}; }

  bool is_true() const { return value == Value::kTrue; }
  bool is_false() const { return value == Value::kFalse; }
  bool is_unknown() const { return value == Value::kUnknown; }

  // "true (witness: ...)", "false", "unknown(bound=B)"
  std::string str() const;
};

struct EvalOptions {
  long bound = kDefaultCoeffBound;
  double ceiling = kDefaultSizeCeiling;
};

// Searches Gamma^n within the coefficient box in canonical order. Tuples with
// the identity in a slot whose coordinates the body mentions are skipped, as
// the identity has no affine coordinates. For a finite Gamma the box covers
// the whole group, so exhaustion yields False instead of Unknown.
TriBool eval_block(const GammaSpec& gamma, const FormulaNode& block, std::size_t free_arity,
                   std::span<const Rational> x, const EvalOptions& options, std::size_t block_id = 0);

TriBool eval_formula(const GammaSpec& gamma, const Formula& f, std::span<const Rational> x,
                     const EvalOptions& options = {});

// Re-checks a witness exactly: points on the variety, realize(coords) ==
// points, and the block body true at (x, coordinates).
bool witness_valid(const GammaSpec& gamma, const FormulaNode& block, std::size_t free_arity,
                   std::span<const Rational> x, const Witness& w);

// Preorder list of the blocks of a formula (index = block_id).
std::vector<const FormulaNode*> collect_blocks(const FormulaNode& root);

}  // namespace mlkit
