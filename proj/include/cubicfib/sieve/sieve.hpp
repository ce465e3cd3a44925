#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cubicfib/ff/counting.hpp"
#include "cubicfib/fibration/fibration.hpp"

namespace cubicfib::sieve {

using forms::FibrationMode;
using forms::Integer;
using forms::IntPolynomial;
using forms::Rational;
using forms::RationalMatrix;
using forms::VariableSplit;

struct Interval {
  Rational lo, hi;
  bool contains(const Rational& t) const { return lo <= t && t <= hi; }
};

// Y * Omega with Omega = T * (product of intervals). An empty T means the identity; otherwise membership tests
// T^{-1} y against the scaled intervals, so every check stays exact.
struct BoxSpec {
  std::vector<Interval> intervals;
  RationalMatrix transform, inverse;
  bool contains(std::span<const Integer> y, const Rational& Y) const;
  // Integer bounding box of Y * Omega, coordinatewise.
  std::vector<std::pair<Integer, Integer>> integer_hull(const Rational& Y) const;
  static BoxSpec cube(std::size_t k, Rational lo, Rational hi);
  static BoxSpec transformed(std::vector<Interval> intervals, const RationalMatrix& T);
};

// y = residue (mod modulus) on the parameter coordinates, taken from a p-adic witness of C.
struct BadPrimeCondition {
  std::int64_t p = 0;
  unsigned v = 0;
  std::int64_t modulus = 0;  // p^{2v-1}
  ff::ModVector residue;     // parameter part of the witness
  ff::PadicWitness witness;  // full point on all n coordinates
  bool reverified = false;
};

// Omega_p for every prime: a congruence at the bad primes, "y mod p off the locus" elsewhere. The locus is the
// common zero set of `locus` (order-3 minors of the Hessian for Pi, the Q_j for PiPrime).
struct LocalConditionSet {
  FibrationMode mode = FibrationMode::PiPrime;
  Integer M = 1;
  std::vector<BadPrimeCondition> bad;
  std::vector<IntPolynomial> locus;  // in the k parameter variables
  // The locus is also {rank locus_matrix <= locus_max_rank}, the form the F_p point counts use.
  forms::PolyMatrix locus_matrix;
  std::size_t locus_max_rank = 0;
  // Good primes up to the cutoff are checked one by one; with exact_good_primes the remaining ones are settled
  // through the gcd of the locus values, which is exact whenever that gcd is nonzero.
  std::int64_t prime_cutoff = 100;
  bool exact_good_primes = true;
  std::vector<std::int64_t> checked_primes;  // replaces the primes up to the cutoff when nonempty
  bool failed = false;
  std::string failure;

  bool is_bad(std::int64_t p) const;
  // First prime p with y outside Omega_p, 0 if none; -1 if y lies on the locus over Q (outside Omega_p for all p).
  std::int64_t first_violation(std::span<const Integer> y) const;
};

LocalConditionSet build_conditions(const IntPolynomial& cubic, const VariableSplit& split, unsigned v_max = 3,
                                   std::uint64_t budget = ff::kDefaultBudget);

struct PrimeCoordinate {
  std::size_t index = 0;
  Rational delta;  // y_index prime in [delta Y, 2 delta Y]
};

struct CoprimePair {
  std::size_t i = 0, j = 0;
  Integer beta_i = 1, beta_j = 1;  // gcd(beta_i y_i, beta_j y_j) = 1
};

// Jacobi symbol (G(y) / y_index) = 1.
struct JacobiCondition {
  IntPolynomial G;
  std::size_t index = 0;
};

struct AdmissibleSetSpec {
  BoxSpec box;
  LocalConditionSet conditions;
  std::optional<PrimeCoordinate> prime;
  std::optional<CoprimePair> coprime;
  std::optional<JacobiCondition> jacobi;
};

struct Membership {
  bool member = false;
  std::string reason;  // first failed predicate: box, local:p, locus, prime, coprime, jacobi, failed-conditions
};

Membership membership(std::span<const Integer> y, const AdmissibleSetSpec& spec, const Rational& Y);

enum class FibreVerdict { SolubleWithPoint, SolublePrincipleInvoked, Insoluble, Unknown };
std::string to_string(FibreVerdict v);

struct FibreSolubility {
  FibreVerdict verdict = FibreVerdict::Unknown;
  std::vector<Integer> point;  // fibre coordinates, when found
  std::vector<std::int64_t> local_primes;  // primes certified by a Z_p solubility check
  std::string reason;
};

// Fibre over y: linear in x for PiPrime (solved by extended gcd), a quadric for Pi.
FibreSolubility fibre_solubility(std::span<const Integer> y, const IntPolynomial& cubic, const VariableSplit& split,
                                 long search_bound = 3, std::uint64_t budget = 2'000'000);

// Fibre polynomial C(x, y) in the fibre variables only.
IntPolynomial fibre_polynomial(const IntPolynomial& cubic, const VariableSplit& split, std::span<const Integer> y);

// Lexicographic walk over the integer hull; visit(y) for each member.
void enumerate_admissible(const AdmissibleSetSpec& spec, const Rational& Y,
                          const std::function<void(const std::vector<Integer>&)>& visit,
                          std::uint64_t budget = 50'000'000);

struct DensityRow {
  Rational Y;
  Integer count;
  Rational density;              // count / Y^k
  std::optional<Rational> delta;  // density minus the previous row's
};

struct DensityEstimate {
  std::vector<DensityRow> rows;
  // Heuristic bound on the density lost by ignoring good primes above the cutoff, from locus counts over F_p.
  double tail_loss = 0;
  double fitted_locus_dim = 0;
};

DensityEstimate density_estimate(const AdmissibleSetSpec& spec, const std::vector<Rational>& Y_list,
                                 std::uint64_t budget = 50'000'000);

std::string density_csv(const DensityEstimate& d);

// C = y_k sum_i alpha_i x_i y_{pair_i} + R(y) under a PiPrime split.
struct ReducibleShape {
  std::size_t k = 0;                 // local parameter index of the common linear factor
  std::vector<std::size_t> pair;     // pair[i] = local parameter index multiplying x_i
  std::vector<Integer> alpha;
  IntPolynomial R;                   // in the parameters
  Integer g;                         // gcd(alpha_0, alpha_1)
  Integer beta0, beta1;
};

std::optional<ReducibleShape> detect_reducible_shape(const IntPolynomial& cubic, const VariableSplit& split);

struct ReducibleCaseSet {
  ReducibleShape shape;
  // Parameter vectors y meeting the prime, coprimality and congruence conditions. The remaining fibre
  // coordinates (all but the first two) are free in [-Y, Y], so the tuple count is ys.size() * (2Y+1)^{fibre-2}.
  std::vector<std::vector<Integer>> ys;
  Integer tuple_count;
  std::size_t verified = 0;  // tuples whose scaled equation was solved and re-evaluated to zero
};

// Enumerates the set for |y|, |x_j| <= Y with y_k prime in [delta Y, 2 delta Y]; throws DimensionError on a
// shape mismatch. Tuples at the box corners and centre are solved explicitly and re-checked.
ReducibleCaseSet reducible_case_set(const IntPolynomial& cubic, const VariableSplit& split, long Y,
                                    const Rational& delta, std::uint64_t budget = 50'000'000);

struct LargeQBox {
  BoxSpec box;              // Omega, in the original parameter coordinates
  bool negated = false;     // built for -Q when Q has no positive direction
  Rational c_lower;         // |Q(y)| >= c_lower P^2 on P * Omega
  Rational c_measured;      // min of |Q(y)| / P^2 over the sampled integer points
  std::size_t samples = 0;
  std::vector<Rational> diagonal;  // Q(T z) = sum diagonal_i z_i^2
};

// Interval box on which |Q| is bounded below, after a rational congruence diagonalization; the square roots are
// replaced by rational bounds rounded inward.
LargeQBox box_with_large_Q(const IntPolynomial& Q, long P, std::uint64_t sample_budget = 200'000);

struct GcdBound {
  Integer bound;  // product over bad primes of p^{2v-1}
  Integer max_gcd;
  std::size_t members = 0;
  bool holds = false;
};

GcdBound gcd_bound_check(const AdmissibleSetSpec& spec, const Rational& Y, std::uint64_t budget = 50'000'000);

}  // namespace cubicfib::sieve
