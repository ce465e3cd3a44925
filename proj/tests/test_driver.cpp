#include "doctest.h"
#include "generators.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cubicfib/driver/driver.hpp"

using namespace cubicfib;
using namespace cubicfib::driver;

namespace {

IntPolynomial var(std::size_t n, std::size_t i) { return IntPolynomial::variable(n, i); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string shipped(const std::string& name) { return std::string(CUBICFIB_SOURCE_DIR) + "/forms/" + name; }

VariableSplit split_of(std::size_t d, std::size_t h, FibrationMode mode) {
  VariableSplit s;
  for (std::size_t i = 0; i < d; ++i) s.x_indices.push_back(i);
  for (std::size_t i = 0; i < h; ++i) s.y_indices.push_back(d + i);
  s.mode = mode;
  return s;
}

std::size_t first_issue_line(const std::string& text) {
  try {
    parse_form_text(text);
  } catch (const FormError& e) {
    REQUIRE_FALSE(e.issues().empty());
    return e.issues().front().line;
  }
  FAIL("document was accepted");
  return 0;
}

}  // namespace

TEST_CASE("form documents parse, validate and round-trip") {
  auto d = parse_form_text(R"({"n": 1, "terms": [{"exponent": [3], "coefficient": "1"}]})");
  CHECK(d.n == 1);
  CHECK(d.polynomial() == var(1, 0) * var(1, 0) * var(1, 0));

  std::string quad = "{\n  \"n\": 2,\n  \"terms\": [\n    {\"exponent\": [3, 0], \"coefficient\": \"1\"},\n"
                     "    {\"exponent\": [1, 1], \"coefficient\": \"2\"}\n  ]\n}\n";
  CHECK(first_issue_line(quad) == 5);
  std::string badsplit = "{\n  \"n\": 2,\n  \"terms\": [{\"exponent\": [3, 0], \"coefficient\": \"1\"}],\n"
                         "  \"split\": {\"x_vars\": [0], \"y_vars\": [5], \"mode\": \"pi\"}\n}\n";
  CHECK(first_issue_line(badsplit) == 4);
  CHECK(first_issue_line("{\n  \"n\": 2,\n  \"terms\": [\n}") == 4);
  CHECK(first_issue_line(R"({"n": 1, "terms": [{"exponent": [3], "coefficient": "x"}]})") == 1);

  // Every degree-3 monomial in four variables: 20 terms.
  std::mt19937_64 rng(3);
  FormDocument doc;
  doc.n = 4;
  for (const auto& e : testgen::monomials_of_degree(4, 3)) {
    long c = 0;
    while (c == 0) c = testgen::uniform(rng, -1000000, 1000000);
    doc.terms.emplace_back(e, Integer(c) * Integer("1000000000000"));
  }
  REQUIRE(doc.terms.size() == 20);
  doc.metadata.name = "twenty \"terms\"";
  doc.metadata.box = std::vector<sieve::Interval>{{-1, Rational(1, 2)}, {Rational(1, 3), 1}};
  auto text = serialize_form(doc);
  auto back = parse_form_text(text);
  CHECK(serialize_form(back) == text);
  CHECK(back.polynomial() == doc.polynomial());

  for (const char* f : {"linear_family_a.json", "linear_family_b.json", "linear_family_c.json"}) {
    auto raw = slurp(shipped(f));
    CHECK(serialize_form(parse_form_text(raw)) == raw);
  }
}

TEST_CASE("brute-force primitive counts") {
  auto c = var(2, 0) * var(2, 0) * var(2, 0) - var(2, 1) * var(2, 1) * var(2, 1);
  auto s = brute_force_N(c, {1, 2, 5});
  for (const auto& p : s.points) CHECK(p.count == 2);

  // x1 x2 x3 at B = 3: one zero coordinate with a primitive nonzero pair (28 pairs), or two zeros and a unit.
  auto xyz = var(3, 0) * var(3, 1) * var(3, 2);
  CHECK(brute_force_N(xyz, {3}).points[0].count == 3 * 28 + 3 * 2);

  // Norm form of a cubic field: no nonzero rational zeros.
  auto a = var(3, 0), b = var(3, 1), cc = var(3, 2);
  auto N = a * a * a + a * a * cc * 2 - a * b * b - a * b * cc * 3 + a * cc * cc + b * b * b - b * cc * cc +
           cc * cc * cc;
  for (const auto& p : brute_force_N(N, {1, 3, 6}).points) CHECK(p.count == 0);
  CHECK(brute_force_N(xyz, {1, 2, 3}).monotone());
  CHECK_THROWS_AS(brute_force_N(xyz, {1000}, 1000), forms::BudgetExceeded);
}

TEST_CASE("floor_power is exact") {
  CHECK(floor_power(512, Rational(9, 10)) == 274);
  CHECK(floor_power(1024, Rational(1, 2)) == 32);
  CHECK(floor_power(1023, Rational(1, 2)) == 31);
  for (long B = 2; B < 300; B += 7) {
    long Y = floor_power(B, Rational(9, 10));
    CHECK(ff::ipow(Integer(Y), 10) <= ff::ipow(Integer(B), 9));
    CHECK(ff::ipow(Integer(Y + 1), 10) > ff::ipow(Integer(B), 9));
  }
}

TEST_CASE("fibration lower bound never exceeds brute force") {
  SUBCASE("reduced linear-fibre instance") {
    const std::size_t n = 6;
    auto x = [&](std::size_t i) { return var(n, i); };
    auto C = x(0) * x(3) * x(3) + x(1) * x(4) * x(4) + x(2) * (x(3) * x(5) - x(4) * x(4)) + x(5) * x(5) * x(5);
    auto split = split_of(3, 3, FibrationMode::PiPrime);
    std::vector<long> Bs = {1, 2, 3, 4, 5, 6};
    auto brute = brute_force_N(C, Bs);
    FibrationCountConfig cfg;
    auto lower = fibration_count(C, split, Bs, cfg);
    bool positive = false;
    for (std::size_t i = 0; i < Bs.size(); ++i) {
      CHECK(lower.series.points[i].count <= brute.points[i].count);
      positive = positive || lower.series.points[i].count > 0;
    }
    CHECK(positive);
    CHECK(lower.series.monotone());
    for (const auto& s : lower.samples) CHECK(s.verified);
  }
  SUBCASE("shipped family at small heights") {
    auto doc = parse_form(shipped("linear_family_a.json"));
    auto C = doc.polynomial();
    std::vector<long> Bs = {1, 2, 3};
    auto brute = brute_force_N(C, Bs);
    for (long B : Bs) {
      FibrationCountConfig cfg;
      cfg.fixed_Y = B;
      auto lower = fibration_count(C, *doc.split, {B}, cfg);
      CHECK(lower.series.points[0].count <= brute.points[std::size_t(B - 1)].count);
    }
  }
  SUBCASE("quadric fibres are labeled as sampled") {
    const std::size_t n = 5;
    auto x = [&](std::size_t i) { return var(n, i); };
    auto C = x(3) * (x(0) * x(0) + x(1) * x(1) - x(2) * x(2)) + x(4) * (x(0) * x(1) + x(2) * x(2)) +
             x(3) * x(4) * x(4) - x(3) * x(3) * x(3);
    auto split = split_of(3, 2, FibrationMode::Pi);
    std::vector<long> Bs = {2, 3, 4};
    auto brute = brute_force_N(C, Bs);
    FibrationCountConfig cfg;
    cfg.fixed_Y = 3;
    auto lower = fibration_count(C, split, Bs, cfg);
    CHECK(lower.sampled);
    CHECK(lower.series.method == "fibration-sampled");
    for (std::size_t i = 0; i < Bs.size(); ++i) CHECK(lower.series.points[i].count <= brute.points[i].count);
  }
  SUBCASE("empty admissible set gives zero") {
    auto doc = parse_form(shipped("linear_family_a.json"));
    FibrationCountConfig cfg;
    cfg.box = sieve::BoxSpec::cube(3, Rational(1, 3), Rational(1, 2));
    cfg.fixed_Y = 1;
    auto lower = fibration_count(doc.polynomial(), *doc.split, {4, 8}, cfg);
    CHECK(lower.fibres == std::vector<std::size_t>{0, 0});
    for (const auto& p : lower.series.points) CHECK(p.count == 0);
  }
}

TEST_CASE("doubling B multiplies the shipped lower bound by about 2^(n-3)") {
  auto doc = parse_form(shipped("linear_family_b.json"));
  FibrationCountConfig cfg;
  cfg.box = sieve::BoxSpec{*doc.metadata.box, {}, {}};
  cfg.y_exponent = *doc.metadata.y_exponent;
  auto fc = fibration_count(doc.polynomial(), *doc.split, {32, 64, 128}, cfg);
  for (std::size_t i = 1; i < fc.series.points.size(); ++i) {
    double ratio = fc.series.points[i].count.get_d() / fc.series.points[i - 1].count.get_d();
    CHECK(ratio > 16);
    CHECK(ratio < 64);
  }
  for (const auto& s : fc.samples) CHECK(s.verified);
}

TEST_CASE("coprime representation counts") {
  const std::size_t r = 5;
  IntPolynomial F(r);
  for (std::size_t i = 0; i < r; ++i) F += var(r, i) * var(r, i);
  std::vector<Integer> zero(r, 0);
  auto rep = representation_count_coprime(F, zero, 25);
  // Oracle: representations of 25 by five squares with not every coordinate even.
  long oracle = 0;
  for (long a = -5; a <= 5; ++a)
    for (long b = -5; b <= 5; ++b)
      for (long c = -5; c <= 5; ++c)
        for (long d = -5; d <= 5; ++d)
          for (long e = -5; e <= 5; ++e)
            if (a * a + b * b + c * c + d * d + e * e == 25 && (a | b | c | d | e) & 1) ++oracle;
  CHECK(rep.count == oracle);
  CHECK(rep.delta == 32);
  CHECK_FALSE(rep.precondition_holds);
  CHECK(rep.consistent());
  CHECK(representation_count_coprime(F, zero, -3).count == 0);

  std::vector<Integer> xi = {1, 0, 0, 0, 0};
  auto shifted = representation_count_coprime(F, xi, 65);
  CHECK(shifted.precondition_holds);
  CHECK(shifted.consistent());

  auto indefinite = var(2, 0) * var(2, 0) - var(2, 1) * var(2, 1);
  CHECK_THROWS_AS(representation_count_coprime(indefinite, {0, 0}, 4), std::domain_error);

  // Main-term shape c P^{r-2}: the normalized counts stay within a bounded band.
  std::vector<double> normalized;
  for (long P : {10L, 20L, 40L}) {
    auto m = representation_count_coprime(F, zero, Integer(P * P), 2);
    CHECK(m.consistent());
    normalized.push_back(m.count.get_d() / std::pow(double(P), 3));
  }
  auto [lo, hi] = std::minmax_element(normalized.begin(), normalized.end());
  CHECK(*lo > 0);
  CHECK(*hi / *lo < 1.5);
}

TEST_CASE("exponent fits") {
  CountSeries sq;
  for (long B : {10L, 20L, 40L, 80L, 160L}) sq.points.push_back({B, Integer(B * B)});
  auto f = fit_exponent(sq);
  CHECK(std::abs(f.slope - 2) < 1e-6);
  CHECK(f.points == 5);

  CountSeries power;
  for (long B : {100L, 200L, 400L, 800L}) {
    double v = 3 * std::pow(double(B), 2.5);
    power.points.push_back({B, Integer(static_cast<long>(std::llround(v)))});
  }
  CHECK(std::abs(fit_exponent(power).slope - 2.5) < 1e-3);
  CHECK(compare(fit_exponent(power), 2.9).pass);
  CHECK_FALSE(compare(fit_exponent(power), 3.1).pass);

  CountSeries few;
  few.points = {{2, 4}, {4, 16}, {8, 0}, {16, 256}};
  CHECK_THROWS_AS(fit_exponent(few), InsufficientData);
}

TEST_CASE("reports are schema-versioned, deterministic and re-parseable") {
  Report empty(Json::object());
  auto j = Json::parse(empty.dump());
  CHECK(j["schema_version"] == 1);
  CHECK(j["sections"].empty());

  CommandOptions analyze;
  analyze.command = "analyze";
  analyze.form_path = shipped("linear_family_a.json");
  auto a = run_command(analyze);
  CHECK(a.sections().contains("fibration"));
  CHECK(a.sections().contains("shape"));
  CHECK(a.sections()["fibration"]["rank"] == 0);

  CommandOptions count;
  count.command = "count";
  count.form_path = shipped("linear_family_a.json");
  count.heights = {16, 32};
  auto r1 = run_command(count), r2 = run_command(count);
  CHECK(r1.dump() == r2.dump());
  auto parsed = Json::parse(r1.dump());
  auto series = count_series_from_json(parsed["sections"]["count"]["series"]);
  CHECK(series.points.size() == 2);
  CHECK(series.config_hash == r1.config_hash());
  CHECK(to_json(series) == parsed["sections"]["count"]["series"]);
  auto csv = report_csv(r1);
  CHECK(csv.rfind("B,count,logB,logN\n16,", 0) == 0);

  count.seed = 2;
  CHECK(run_command(count).config_hash() != r1.config_hash());

  CommandOptions local;
  local.command = "local";
  local.form_path = shipped("linear_family_a.json");
  auto l = run_command(local);
  CHECK(l.sections()["local_conditions"]["bad_primes"].empty());
  CHECK(l.sections()["local_conditions"]["failed"] == false);

  CommandOptions lat;
  lat.command = "lattice-count";
  lat.normal = {"1", "1"};
  lat.heights = {5};
  CHECK(run_command(lat).sections()["lattice_count"]["rows"][0]["count"] == "7");

  CommandOptions bad;
  bad.command = "nope";
  CHECK_THROWS_AS(run_command(bad), std::invalid_argument);
}

TEST_CASE("admissible density of the shipped family stabilizes") {
  for (const char* name : {"linear_family_a.json", "linear_family_b.json", "linear_family_c.json"}) {
    auto doc = parse_form(shipped(name));
    sieve::AdmissibleSetSpec spec;
    spec.box = sieve::BoxSpec{*doc.metadata.box, {}, {}};
    spec.conditions = sieve::build_conditions(doc.polynomial(), *doc.split);
    auto est = sieve::density_estimate(spec, {Rational(40), Rational(80), Rational(160), Rational(320)});
    CHECK(est.rows.back().density > 0);
    double prev = INFINITY;
    for (std::size_t i = 1; i < est.rows.size(); ++i) {
      double d = std::abs(est.rows[i].delta->get_d());
      CHECK(d < prev);
      prev = d;
    }
  }
}
