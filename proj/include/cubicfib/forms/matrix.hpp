#pragma once

#include <optional>
#include <vector>

#include "cubicfib/forms/polynomial.hpp"

namespace cubicfib::forms {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}
  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool is_symmetric() const;

  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  RationalMatrix transpose() const;
  RationalMatrix operator*(const RationalMatrix& o) const;
  std::vector<Rational> operator*(const std::vector<Rational>& v) const;
  bool operator==(const RationalMatrix& o) const;

  RationalMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;

  Rational determinant() const;
  std::size_t rank() const;
  std::optional<RationalMatrix> inverse() const;
  // Least common denominator of all entries.
  Integer common_denominator() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

struct Inertia {
  std::size_t rank = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  bool operator==(const Inertia&) const = default;
};

// transform^T * q * transform = diag(diagonal); transform is invertible.
struct CongruenceDiagonalization {
  RationalMatrix transform;
  std::vector<Rational> diagonal;
};

// Symmetric Lagrange reduction over Q. Nonzero diagonal entries come first.
CongruenceDiagonalization diagonalize_congruence(const RationalMatrix& q);

Inertia rank_signature_over_Q(const RationalMatrix& q);

struct AdjugateResult {
  RationalMatrix adjugate;
  Rational determinant;
};

// Cofactor adjugate; valid for singular matrices as well.
AdjugateResult adjugate_and_det(const RationalMatrix& m);

using IntMatrix = std::vector<std::vector<Integer>>;

// Rank over Q of an integer matrix by fraction-free elimination.
std::size_t integer_rank(IntMatrix m);
Integer integer_determinant(IntMatrix m);

// Matrices over Z[y_1..y_h].
using PolyMatrix = std::vector<std::vector<IntPolynomial>>;

// Determinant by fraction-free elimination with exact polynomial division.
IntPolynomial symbolic_determinant(PolyMatrix m);

struct SymbolicRank {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;
  std::vector<std::size_t> pivot_cols;
};

// Rank over the fraction field Q(y), with the rows and columns of a nonvanishing minor.
SymbolicRank symbolic_rank(const PolyMatrix& m);

PolyMatrix poly_submatrix(const PolyMatrix& m, const std::vector<std::size_t>& rows,
                          const std::vector<std::size_t>& cols);

IntMatrix evaluate_matrix(const PolyMatrix& m, std::span<const Integer> point);

}  // namespace cubicfib::forms
