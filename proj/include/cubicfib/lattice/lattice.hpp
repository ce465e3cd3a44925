#pragma once

#include <optional>
#include <vector>

#include "cubicfib/forms/matrix.hpp"

namespace cubicfib::lattice {

using forms::Integer;
using forms::Rational;
using IntVector = std::vector<Integer>;

struct IntegerLattice {
  std::vector<IntVector> basis;  // rows
  std::size_t ambient_dim = 0;

  std::size_t rank() const { return basis.size(); }
  // det(G G^T), the squared covolume.
  Integer gram_determinant() const;
  bool contains(const IntVector& v) const;
};

Integer dot(const IntVector& a, const IntVector& b);
Integer norm_sq(const IntVector& a);
Integer content(const IntVector& a);

// Unimodular U with a U = (g, 0, ..., 0), g = gcd(a) > 0.
forms::IntMatrix unimodular_completion(const IntVector& a, Integer* g);

// {x in Z^n : a.x = 0}, LLL-reduced.
IntegerLattice kernel_lattice(const IntVector& a);

struct LLLResult {
  IntegerLattice reduced;
  forms::IntMatrix transform;  // reduced = transform * original, unimodular
};

LLLResult lll_reduce(const IntegerLattice& l, const Rational& delta = Rational(3, 4));
// Checks size reduction and the Lovasz condition exactly.
bool is_lll_reduced(const IntegerLattice& l, const Rational& delta = Rational(3, 4));

struct ShortestVector {
  IntVector vector;
  Integer norm_sq;
};

// Exact shortest nonzero vector by enumeration; rank at most 8.
ShortestVector shortest_vector_exact(const IntegerLattice& l);

// N(a, b, B): #{x in Z^n : |x|^2 + 1 <= B^2, a.x + b = 0}, with B^2 given exactly.
Integer hyperplane_count_exact(const IntVector& a, const Integer& b, const Rational& B_sq,
                               std::uint64_t budget = 2'000'000'000ull);

// Same count restricted to gcd(x_1, ..., x_n, g) = 1, by Moebius inversion over d | (b, g).
Integer hyperplane_count_coprime(const IntVector& a, const Integer& b, const Rational& B_sq, const Integer& g,
                                 std::uint64_t budget = 2'000'000'000ull);

struct AsymptoticCount {
  std::optional<Integer> exact;
  double main = 0;
  double err_eta = 0;
  double err_lambda = 0;
  Integer lambda1_sq;
  bool within_budget() const;
};

// Frozen constants of the error budget, n = ambient dimension.
double eta_error_constant(std::size_t n);
double lambda_error_constant(std::size_t n);

AsymptoticCount hyperplane_count_asymptotic(const IntVector& a, const Integer& b, const Integer& B, double eta,
                                            bool compute_exact = true);

// coefficient * pi^(half_pi_power / 2)
struct PiPower {
  Rational coefficient;
  int half_pi_power = 0;
  double value() const;
};

// Product over j = 0..l-2 of Gamma(1/2) Gamma((j+1)/2) / Gamma(j/2 + 1).
PiPower volume_constant(std::size_t l);

// Volume of the l-dimensional slice {u : |u|^2 + a^2 <= B^2}; 1 when l = 0.
double ball_slice_volume(std::size_t l, double B, double a);

// pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(std::size_t n);

}  // namespace cubicfib::lattice
