#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cubicfib/sieve/sieve.hpp"

namespace cubicfib::driver {

using forms::Exponent;
using forms::FibrationMode;
using forms::Integer;
using forms::IntPolynomial;
using forms::Rational;
using forms::VariableSplit;
using Json = nlohmann::ordered_json;

struct FormIssue {
  std::size_t line = 0;  // 1-based; 0 when no line applies
  std::string message;
};

class FormError : public std::runtime_error {
 public:
  explicit FormError(std::vector<FormIssue> issues);
  const std::vector<FormIssue>& issues() const { return issues_; }

 private:
  std::vector<FormIssue> issues_;
};

struct FormMetadata {
  std::optional<std::string> name;
  std::optional<long> expected_r, expected_h;
  // Parameter box Omega as [lo, hi] per parameter, and the exponent e in Y = floor(B^e).
  std::optional<std::vector<sieve::Interval>> box;
  std::optional<Rational> y_exponent;
};

// Terms keep their document order so that the serializer reproduces a canonical file byte for byte.
struct FormDocument {
  std::size_t n = 0;
  unsigned degree = 3;
  std::vector<std::pair<Exponent, Integer>> terms;
  std::optional<VariableSplit> split;
  FormMetadata metadata;

  IntPolynomial polynomial() const;
  static FormDocument from_polynomial(const IntPolynomial& c);
};

FormDocument parse_form_text(const std::string& text);
FormDocument parse_form(const std::string& path);
std::string serialize_form(const FormDocument& doc);

struct CountPoint {
  long B = 0;
  Integer count;
};

struct CountSeries {
  std::vector<CountPoint> points;
  std::string predicate = "primitive";  // primitive points of B[-1, 1]^n
  std::string method;                    // brute-force, fibration-exact, fibration-sampled
  std::uint64_t config_hash = 0;
  bool monotone() const;
};

// #{x primitive, |x_i| <= B, C(x) = 0} for every B in the list, from one sweep at the largest B.
CountSeries brute_force_N(const IntPolynomial& C, const std::vector<long>& B_list,
                          std::uint64_t budget = 200'000'000);

struct FibrationCountConfig {
  sieve::BoxSpec box;            // Omega; an empty box means [-1, 1]^h
  Rational y_exponent{9, 10};    // Y = floor(B^e), e = 1 - 2 eps with eps = 1/20
  std::optional<long> fixed_Y;   // overrides the exponent rule
  unsigned v_max = 3;
  std::uint64_t seed = 1;
  std::size_t max_fibres = 2000;  // quadric fibres only
  std::uint64_t budget = 50'000'000;
  std::size_t samples_per_B = 3;
};

struct PointSample {
  long B = 0;
  std::vector<Integer> point;  // all n coordinates
  bool verified = false;       // C(point) == 0, evaluated exactly
};

struct FibrationCount {
  CountSeries series;
  std::vector<long> Y;               // per B
  std::vector<std::size_t> fibres;   // admissible parameter vectors used per B
  std::vector<PointSample> samples;
  bool sampled = false;              // quadric fibres: bounded search over a subset of fibres
  std::string conditions_failure;    // nonempty when the local conditions could not be built
};

// floor(B^e) for a rational e >= 0, exactly.
long floor_power(long B, const Rational& e);

// Lower bound sum over admissible y of the fibre counts; every counted point is primitive and lies in B[-1, 1]^n.
FibrationCount fibration_count(const IntPolynomial& C, const VariableSplit& split, const std::vector<long>& B_list,
                               const FibrationCountConfig& config = {});

struct CoprimeRepresentation {
  Integer count;                                  // gcd(x, 2 Delta) = 1
  Integer delta;                                  // determinant of the Hessian of F
  std::vector<std::pair<Integer, Integer>> by_divisor;  // squarefree d | 2 Delta with M_d
  Integer mobius_sum;
  bool precondition_holds = false;  // F(xi) = N mod 2 Delta
  bool consistent() const { return mobius_sum == count; }
};

// Solutions of F(x + xi) = N with x in the window [-w P, w P]^r, P = sqrt(N); F positive definite.
CoprimeRepresentation representation_count_coprime(const IntPolynomial& F, const std::vector<Integer>& xi,
                                                   const Integer& N, const Rational& window = 2,
                                                   std::uint64_t budget = 500'000'000);

struct ExponentFit {
  double slope = 0, intercept = 0;
  std::vector<double> residuals;
  std::size_t points = 0;
};

class InsufficientData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ExponentFit fit_exponent(const CountSeries& series);

struct FitVerdict {
  double predicted = 0, slack = 0.5;
  bool pass = false;
};

FitVerdict compare(const ExponentFit& fit, double predicted, double slack = 0.5);

std::uint64_t fnv1a(const std::string& s);

// Schema-versioned report; sections are added in call order and the serialization is deterministic.
class Report {
 public:
  explicit Report(const Json& config);
  void add(const std::string& section, Json value) { sections_[section] = std::move(value); }
  Json to_json() const;
  std::string dump() const { return to_json().dump(2) + "\n"; }
  std::uint64_t config_hash() const { return hash_; }
  const Json& sections() const { return sections_; }

 private:
  Json config_;
  Json sections_ = Json::object();
  std::uint64_t hash_ = 0;
};

inline constexpr int kReportSchemaVersion = 1;

Json to_json(const CountSeries& s);
Json to_json(const ExponentFit& f);
Json to_json(const FibrationCount& f);
Json to_json(const CoprimeRepresentation& r);
Json to_json(const fibration::FibrationData& fd);
Json to_json(const fibration::ShapeClassification& s);
Json to_json(const sieve::LocalConditionSet& c);
Json to_json(const sieve::DensityEstimate& d);
std::string count_csv(const CountSeries& s);

// Inverse of to_json(CountSeries); used for round trips and the fit-exponent subcommand.
CountSeries count_series_from_json(const Json& j);

// Options shared by the command-line subcommands; unset fields take the subcommand defaults.
struct CommandOptions {
  std::string command;  // analyze, local, lattice-count, density, count, fit-exponent
  std::optional<std::string> form_path;
  std::optional<std::string> mode;  // pi or pi_prime, overrides the document split
  std::uint64_t seed = 1;
  std::uint64_t budget = 50'000'000;
  long pmax = 100;
  unsigned v_max = 3;
  std::vector<long> heights;         // B values for count, Y values for density
  std::string method = "fibration";  // count: fibration or brute
  std::optional<long> fixed_Y;
  std::vector<std::string> normal;   // lattice-count: a
  std::string shift = "0";           // lattice-count: b
  std::optional<std::string> series_path;  // fit-exponent input
  std::optional<double> predicted;
  double slack = 0.5;
};

// Runs one subcommand and returns its report; throws on invalid input.
Report run_command(const CommandOptions& opt);

// CSV view of a report: the count series for count and fit-exponent, the density table for density.
std::string report_csv(const Report& r);

}  // namespace cubicfib::driver
