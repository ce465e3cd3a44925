#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cubicfib/forms/matrix.hpp"
#include "cubicfib/forms/quadratic.hpp"

namespace cubicfib::fibration {

using forms::Integer;
using forms::IntMatrix;
using forms::IntPolynomial;
using forms::LinearChange;
using forms::PolyMatrix;
using forms::Rational;
using forms::RationalMatrix;
using forms::VariableSplit;

// C = sum_i y_i F_i(x) + sum_j x_j q_j(y) + R(y). F_i live in the fibre variables, q_j and R in the parameters,
// both with local indices following the split.
struct Decomposition {
  std::vector<IntPolynomial> F;  // one per parameter
  std::vector<IntPolynomial> q;  // one per fibre variable
  IntPolynomial R;
  IntPolynomial reassemble(const VariableSplit& split, std::size_t n) const;
};

struct RandomizedRecord {
  std::uint64_t seed = 0;
  unsigned trials = 0;
  std::size_t estimate = 0;  // largest rank seen at random points
};

struct FibrationData {
  VariableSplit split;
  std::size_t n = 0;
  IntPolynomial cubic;
  Decomposition parts;
  // Hessian of Q_y in the fibre variables: 2 M[y], entries linear forms in the parameters.
  PolyMatrix hessian;
  std::size_t rank = 0;
  std::vector<std::size_t> witness_rows, witness_cols;
  // det of the Hessian submatrix, equal to 2^rank times the corresponding minor of M[y].
  IntPolynomial witness_minor;
  RandomizedRecord record;
  bool all_larger_minors_vanish = false;   // symbolic rank over Q(y) equals rank
  bool larger_minors_expanded = false;     // every order rank+1 minor was also expanded individually

  std::size_t fibre_dim() const { return split.x_indices.size(); }
  std::size_t param_dim() const { return split.y_indices.size(); }
};

class SymbolicMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class FalsificationAlarm : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Decomposition decompose(const IntPolynomial& cubic, const VariableSplit& split);

// Randomized rank at points with coordinates in [-10^6, 10^6], confirmed symbolically.
FibrationData build_fibration(const IntPolynomial& cubic, const VariableSplit& split, std::uint64_t seed = 1,
                              unsigned trials = 4);

struct RankResult {
  std::size_t rank = 0;
  std::vector<std::size_t> rows, cols;
  IntPolynomial witness_minor;
  RandomizedRecord record;
  bool all_larger_minors_vanish = false;
  bool larger_minors_expanded = false;
};

// Largest order of a minor not vanishing identically; throws SymbolicMismatch if the phases disagree.
RankResult fibration_rank(const PolyMatrix& m, std::size_t num_params, std::uint64_t seed = 1, unsigned trials = 4);

enum class BlockStatus { Certified, NoFullRankCombination, PreconditionViolated };
std::string to_string(BlockStatus s);

struct LinearBlock {
  BlockStatus status = BlockStatus::NoFullRankCombination;
  std::vector<Integer> combination;  // coefficients c_i of the diagonalized form sum c_i F_i
  LinearChange change;               // on all n coordinates
  IntPolynomial transformed;         // denominator^3 * C(change x)
  std::vector<std::size_t> linear_vars;  // global indices of the certified linear fibre variables
  std::string detail;
};

LinearBlock extract_linear_block(const FibrationData& fd, int coefficient_bound = 2);

struct SemidefiniteProduct {
  bool holds = false;
  IntPolynomial l;  // in the parameters, primitive
  IntPolynomial F;  // in the fibre variables
  forms::Inertia inertia;
  bool definite_on_support = false;
  bool certificate_verified = false;
  std::string reason;
};

SemidefiniteProduct detect_semidefinite_product(const FibrationData& fd);

struct IndefiniteWitness {
  std::vector<Integer> point;
  forms::Inertia inertia;
  Integer minor_value;
  Rational box_radius;  // heuristic: the witness minor keeps its sign at the box corners
};

// Inertia of M at u when its rank is the fibration rank, the witness minor is nonzero, and both signs occur.
std::optional<forms::Inertia> check_indefinite_point(const FibrationData& fd, const std::vector<Integer>& u);

IndefiniteWitness indefinite_witness(const FibrationData& fd, std::uint64_t seed = 1,
                                     std::uint64_t budget = 100'000);

// Distinct primitive linear forms dividing a nonzero homogeneous polynomial, first nonzero coefficient positive.
std::vector<IntPolynomial> linear_factors(const IntPolynomial& p);

struct CommonFactor {
  IntPolynomial l;
  std::vector<IntPolynomial> cofactors;  // Q_j = l * cofactors[j]
};

// For the parameter quadrics Q_j = q_j of a split with x-linear fibres.
std::optional<CommonFactor> detect_common_linear_factor_Qi(const FibrationData& fd);
std::optional<CommonFactor> common_linear_factor(const std::vector<IntPolynomial>& polys);

// Quadric bundle Psi(x, y) = sum_i x_i psi_i(y); the y-Hessian has entries linear in x.
struct QuadricBundle {
  std::vector<IntPolynomial> psi;  // quadratic forms in num_y variables
  std::size_t num_y = 0;
  PolyMatrix y_hessian() const;    // entries in the num_x = psi.size() variables
  IntPolynomial as_polynomial() const;  // in num_x + num_y variables, x first
};

QuadricBundle bundle_of(const FibrationData& fd);

enum class Rank2Shape { None, TwoForms, FactoredProduct, GeometricallyIntegral };
std::string to_string(Rank2Shape s);

struct Rank2Classification {
  std::size_t rank_over_K = 0;
  Rank2Shape shape = Rank2Shape::None;
  bool x_nondegenerate = false;
  // New coordinates y' = change * y (rows are the new coordinate forms).
  RationalMatrix change;
  Rational kappa;
  // scale * Psi = (y_1' + kappa y_2') (a11 (y_1' - kappa y_2') + sum_i a1[i] y_i').
  Integer scale = 1;
  IntPolynomial factor;              // y_1' + kappa y_2' expressed in y
  IntPolynomial a11;                 // in x
  std::vector<IntPolynomial> a1;     // a_{1,i}(x), i = 3..num_y in the new coordinates
  bool identity_verified = false;
  bool delta_relations_verified = false;
  std::string alarm;
};

Rank2Classification classify_rank2_bundle(const QuadricBundle& bundle);

enum class FactorStatus { LinearFactor, None, NonlinearSuspected, Unknown };
std::string to_string(FactorStatus s);

struct CodimProbe {
  std::vector<std::int64_t> primes;
  std::vector<double> counts;       // projective points, exact or sampled
  std::vector<bool> sampled;
  double fitted_projective_dim = 0;
  int codim_estimate = 0;
  std::uint64_t seed = 0;
};

struct MinorFactorResult {
  FactorStatus status = FactorStatus::None;
  std::size_t nonzero_minors = 0;
  IntPolynomial factor;
  IntMatrix param_change;  // y = param_change * z with factor(y) = z_1
  PolyMatrix transformed;  // Hessian in z
  bool slice_rank_verified = false;
  CodimProbe codim;
};

MinorFactorResult order3_minor_common_factor(const FibrationData& fd, std::uint64_t seed = 1,
                                             const std::vector<std::int64_t>& probe_primes = {101, 211, 401});

// Nonzero order-k minors of m as (rows, cols, determinant); throws BudgetExceeded beyond dimension 12.
struct Minor {
  std::vector<std::size_t> rows, cols;
  IntPolynomial value;
};
std::vector<Minor> nonzero_minors(const PolyMatrix& m, std::size_t order);

// F_p-points of {rank m <= max_rank} in projective parameter space.
CodimProbe codim_probe(const PolyMatrix& m, std::size_t num_params, std::size_t max_rank,
                       const std::vector<std::int64_t>& primes, std::uint64_t seed,
                       std::uint64_t budget = 4'000'000);

struct SingularProbe {
  std::vector<std::int64_t> primes;
  std::vector<double> counts;  // affine points with vanishing gradient
  std::vector<bool> sampled;
  double fitted_dim = 0;
  int estimate = 0;
  std::uint64_t seed = 0;
};

SingularProbe singular_locus_dim_probe(const IntPolynomial& f, const std::vector<std::int64_t>& primes = {11, 13, 17,
                                                                                                         19, 23},
                                       std::uint64_t seed = 1, std::uint64_t budget = 4'000'000);

struct LowRankCount {
  Integer count;
  bool degenerate = false;  // rank <= 2 identically
};

// #{x in [-R, R]^k : rank m[x] <= 2} for a matrix with entries polynomial in k variables.
LowRankCount low_rank_specialization_count(const PolyMatrix& m, std::size_t num_vars, long R,
                                           std::uint64_t budget = 50'000'000);

enum class ShapeTag { Auto, SemidefiniteProduct, IndefiniteBundle, LinearBlock };

struct ExponentPrediction {
  long n = 0, h = 0, r = 0;
  Rational eps;
  Rational gamma, delta, beta, alpha;
  Rational rank_exponent, split_exponent;  // r - 2 + 2(n - r - 1)/3 and n - h - 2 + (h - 1)/2
  std::string bound;        // which lower bound applies to the shape
  Rational exponent;        // exponent of B in that lower bound
  std::vector<std::string> warnings;
};

ExponentPrediction predicted_exponents(long n, long h, long r, const Rational& eps, ShapeTag shape);

struct ShapeClassification {
  SemidefiniteProduct product;
  std::optional<CommonFactor> common_factor_Qi;
  std::optional<MinorFactorResult> minor_factor;
  std::optional<Rank2Classification> rank2;
  std::size_t linear_block_size = 0;
};

ShapeClassification classify_shape(const FibrationData& fd, std::uint64_t seed = 1);

}  // namespace cubicfib::fibration
