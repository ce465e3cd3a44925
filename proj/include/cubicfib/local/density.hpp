#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubicfib/ff/counting.hpp"

namespace cubicfib::local {

using forms::Integer;
using forms::IntPolynomial;
using forms::Rational;

class ConvergenceNotCertified : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct DensityRecord {
  std::int64_t p = 0;
  unsigned t = 0;
  Integer numerator;    // N(p^t)
  Integer denominator;  // p^{t(m-1)}
  bool stable = false;  // sigma at t equals sigma at t-1
  Rational value() const;
};

// N(p^t) / p^{t(m-1)} for a polynomial in m variables.
Rational sigma_p(const IntPolynomial& f, std::int64_t p, unsigned t, std::uint64_t budget = ff::kDefaultBudget);
DensityRecord sigma_p_record(const IntPolynomial& f, std::int64_t p, unsigned t,
                             std::uint64_t budget = ff::kDefaultBudget);

// S_{p^k} for k = 1..k_max from successive density differences.
std::vector<Integer> S_pk_extract(const IntPolynomial& f, std::int64_t p, unsigned k_max,
                                  std::uint64_t budget = ff::kDefaultBudget);

// Determinant of the integer Hessian of the quadratic part.
Integer hessian_discriminant(const IntPolynomial& f);

// p is odd and does not divide the Hessian discriminant.
bool is_good_prime(const IntPolynomial& f, std::int64_t p);

// 2 for good primes; 2v+1 for bad ones, v the level of the first p-adic witness.
unsigned default_truncation(const IntPolynomial& f, std::int64_t p, unsigned v_max = 4);

struct SingularSeries {
  Rational product;
  std::vector<DensityRecord> factors;
};

// Product of sigma_p over p <= p_max; requires rank >= 5 of the quadratic part.
SingularSeries singular_series(const IntPolynomial& f, std::int64_t p_max, std::optional<unsigned> t = std::nullopt,
                               std::uint64_t budget = ff::kDefaultBudget);

struct SeriesLowerBound {
  Rational bound;            // product of the three factors
  Rational special_factor;   // primes dividing 2 * gcd of top minors, from p-adic witnesses
  Rational explicit_factor;  // remaining primes <= p_max, from nonsingular counts mod p
  Rational tail_factor;      // primes > p_max
  Integer minor_gcd;
  std::vector<std::pair<std::int64_t, Rational>> prime_floors;
};

// Frozen tail constant: sigma_p >= 1 - kTailConstant / p^2 for p prime to 2 * minor_gcd.
inline constexpr int kTailConstant = 2;

SeriesLowerBound series_lower_bound_certificate(const IntPolynomial& f, std::int64_t p_max, unsigned v_max = 3,
                                                std::uint64_t budget = ff::kDefaultBudget);

enum class Solubility { Soluble, InsolubleCertified, Unknown };
std::string to_string(Solubility s);

struct SolubilityResult {
  Solubility verdict = Solubility::Unknown;
  std::optional<ff::PadicWitness> witness;
  unsigned empty_level = 0;  // k with N(p^k) = 0 when insoluble
  std::string reason;
};

SolubilityResult solubility_quadric_Zp(const IntPolynomial& f, std::int64_t p, unsigned v_max = 3,
                                       std::uint64_t budget = ff::kDefaultBudget);

// Rank over Q of the quadratic part.
std::size_t quadratic_rank(const IntPolynomial& f);

}  // namespace cubicfib::local
