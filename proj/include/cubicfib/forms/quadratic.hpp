#pragma once

#include <string>
#include <vector>

#include "cubicfib/forms/matrix.hpp"
#include "cubicfib/forms/polynomial.hpp"

namespace cubicfib::forms {

// x^T Q x + B^T x + N. Q is symmetric with half-integer off-diagonal entries.
struct QuadraticPolynomial {
  RationalMatrix Q;
  std::vector<Integer> B;
  Integer N = 0;

  std::size_t num_vars() const { return B.size(); }
  Integer evaluate(std::span<const Integer> x) const;
  IntPolynomial to_polynomial() const;
  // Integer Hessian 2Q.
  IntMatrix hessian() const;
};

// Splits a polynomial of total degree at most 2 into its quadratic data.
QuadraticPolynomial quadratic_data(const IntPolynomial& p);

enum class FibrationMode { Pi, PiPrime };

std::string to_string(FibrationMode mode);
FibrationMode fibration_mode_from_string(const std::string& s);

// Roles of the coordinates: x_indices are the fibre variables, y_indices the parameters.
struct VariableSplit {
  std::vector<std::size_t> x_indices;
  std::vector<std::size_t> y_indices;
  FibrationMode mode = FibrationMode::Pi;

  // Checks the two index lists partition {0, ..., n-1}.
  void validate(std::size_t n) const;
  // Also checks the x-degree bound of the mode (2 for Pi, 1 for PiPrime).
  void validate_for(const IntPolynomial& c) const;
};

// x -> (matrix * x) / denominator.
struct LinearChange {
  IntMatrix matrix;
  Integer denominator = 1;

  std::size_t dimension() const { return matrix.size(); }
  static LinearChange identity(std::size_t n);
};

// denominator^deg(p) * p(matrix x / denominator); an integer polynomial.
IntPolynomial substitute_linear(const IntPolynomial& p, const LinearChange& t);

// Inverse change with the denominator cleared; throws if the matrix is singular.
LinearChange inverse(const LinearChange& t);

LinearChange compose(const LinearChange& outer, const LinearChange& inner);

}  // namespace cubicfib::forms
