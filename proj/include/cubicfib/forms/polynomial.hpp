#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubicfib::forms {

using Integer = mpz_class;
using Rational = mpq_class;
using Exponent = std::vector<unsigned>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Graded lexicographic order with the largest monomial first.
struct GrlexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

unsigned exponent_degree(const Exponent& e);

class IntPolynomial {
 public:
  using TermMap = std::map<Exponent, Integer, GrlexGreater>;

  IntPolynomial() = default;
  explicit IntPolynomial(std::size_t num_vars) : num_vars_(num_vars) {}

  static IntPolynomial constant(std::size_t num_vars, const Integer& c);
  static IntPolynomial variable(std::size_t num_vars, std::size_t index);
  static IntPolynomial monomial(Exponent e, const Integer& c);

  std::size_t num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  // -1 for the zero polynomial.
  int total_degree() const;
  bool is_homogeneous() const;
  Integer coefficient(const Exponent& e) const;
  Integer content() const;

  // Adds c * x^e, dropping the term if it cancels.
  void add_term(const Exponent& e, const Integer& c);

  IntPolynomial& operator+=(const IntPolynomial& o);
  IntPolynomial& operator-=(const IntPolynomial& o);
  IntPolynomial& operator*=(const IntPolynomial& o);
  IntPolynomial& operator*=(const Integer& c);
  IntPolynomial operator-() const;
  friend IntPolynomial operator+(IntPolynomial a, const IntPolynomial& b) { return a += b; }
  friend IntPolynomial operator-(IntPolynomial a, const IntPolynomial& b) { return a -= b; }
  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend IntPolynomial operator*(IntPolynomial a, const Integer& c) { return a *= c; }
  friend IntPolynomial operator*(const Integer& c, IntPolynomial a) { return a *= c; }
  bool operator==(const IntPolynomial& o) const;

  IntPolynomial pow(unsigned k) const;

  Integer evaluate(std::span<const Integer> point) const;
  Rational evaluate(std::span<const Rational> point) const;

  IntPolynomial partial(std::size_t var) const;
  std::vector<IntPolynomial> gradient() const;

  // Returns p(g_1, ..., g_n); every image must share one variable count.
  IntPolynomial compose(std::span<const IntPolynomial> images) const;

  // Substitutes integer values for the listed variables, keeping the others.
  IntPolynomial specialize(std::span<const std::size_t> vars,
                           std::span<const Integer> values) const;

  // Re-embeds into a ring with new_num_vars variables; variable i goes to map[i].
  IntPolynomial embed(std::size_t new_num_vars, std::span<const std::size_t> map) const;

  IntPolynomial homogeneous_part(unsigned degree) const;
  // Maximum over terms of the summed exponents of the given variables.
  unsigned degree_in(std::span<const std::size_t> vars) const;

  // One term per line: "coef e1 ... en", leading term first.
  std::string to_text() const;
  static IntPolynomial from_text(std::size_t num_vars, const std::string& text);
  std::string to_string() const;

 private:
  std::size_t num_vars_ = 0;
  TermMap terms_;

  void check_compatible(const IntPolynomial& o) const;
};

// Exact quotient a / b over Z, or nullopt when b does not divide a.
std::optional<IntPolynomial> exact_divide(const IntPolynomial& a, const IntPolynomial& b);

// Evaluation of a fixed polynomial at machine-integer points.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const IntPolynomial& p);

  std::size_t num_vars() const { return num_vars_; }
  // Value mod q for 0 < q < 2^62, result in [0, q).
  std::int64_t eval_mod(const std::int64_t* x, std::int64_t q) const;
  // Exact value; caller guarantees it fits in 127 bits.
  __int128 eval_exact(const std::int64_t* x) const;
  Integer eval_big(const std::int64_t* x) const;
  // Largest absolute coefficient bound, used for overflow checks.
  double coefficient_l1() const { return l1_; }
  unsigned degree() const { return degree_; }
  bool small_coefficients() const { return fits_; }

 private:
  std::size_t num_vars_ = 0;
  unsigned degree_ = 0;
  double l1_ = 0;
  std::vector<Integer> big_coeffs_;
  std::vector<__int128> coeffs_;
  bool fits_ = true;
  std::vector<std::vector<unsigned>> exps_;
};

}  // namespace cubicfib::forms
