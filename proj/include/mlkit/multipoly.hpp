#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mlkit/rational.hpp"

namespace mlkit {

using Exponent = std::vector<unsigned>;

// Graded lexicographic order, largest monomial first.
struct GrlexDescending {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

// Sparse polynomial over Q in a fixed number of variables x1..xs.
// No stored coefficient is zero; all exponent vectors have length s.
class MultiPoly {
 public:
  using TermMap = std::map<Exponent, Rational, GrlexDescending>;

  explicit MultiPoly(std::size_t arity = 0) : arity_(arity) {}

  static MultiPoly constant(std::size_t arity, const Rational& c);
  // Variable with 0-based index.
  static MultiPoly variable(std::size_t arity, std::size_t index);

  std::size_t arity() const { return arity_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned total_degree() const;
  bool uses_variable(std::size_t index) const;

  void add_term(Exponent exponent, const Rational& coeff);

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly pow(unsigned e) const;

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) = default;

  Rational eval(std::span<const Rational> point) const;

  // Substitutes values for the trailing tail.size() variables; the result
  // lives in the leading arity() - tail.size() variables.
  MultiPoly partial_evaluate(std::span<const Rational> tail) const;

  // Same polynomial viewed in more variables (new ones appended, unused).
  MultiPoly extend(std::size_t new_arity) const;

  // Infix rendering in graded-lex order, e.g. "x1^2 - 3*x1 + 5".
  std::string str() const;

 private:
  void check_compatible(const MultiPoly& o) const;

  std::size_t arity_;
  TermMap terms_;
};

// Sum of p_i^2; over the reals its zero set is the common zero set of the p_i.
MultiPoly sum_of_squares_combine(std::span<const MultiPoly> polys);

}  // namespace mlkit
