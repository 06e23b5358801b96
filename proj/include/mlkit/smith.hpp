#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mlkit/rational.hpp"

namespace mlkit {

using IntVector = std::vector<Integer>;

// Dense row-major integer matrix. Zero-row and zero-column shapes are valid.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVector column(std::size_t j) const;
  IntVector apply(const IntVector& v) const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  std::string str() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

// U * M * V = D with U, V unimodular and D diagonal, d1 | d2 | ..., d_i >= 0.
struct SmithForm {
  IntMatrix u;
  IntMatrix d;
  IntMatrix v;
  std::size_t rank = 0;

  IntVector diagonal() const;
};

SmithForm smith_normal_form(const IntMatrix& m);

// Fraction-free (Bareiss) determinant of a square matrix.
Integer determinant(const IntMatrix& m);

// Basis of {v in Z^cols : M v = 0}, in Hermite normal form.
std::vector<IntVector> integer_kernel(const IntMatrix& m);

// Row Hermite normal form of the lattice spanned by the given vectors:
// echelon, positive pivots, entries above pivots reduced into [0, pivot).
// Zero rows are dropped.
std::vector<IntVector> hermite_basis(std::vector<IntVector> rows);

}  // namespace mlkit
