#include "doctest.h"
#include "generators.hpp"

#include <algorithm>

#include "cubicfib/fibration/fibration.hpp"

using namespace cubicfib;
using namespace cubicfib::fibration;

namespace {

IntPolynomial var(std::size_t n, std::size_t i) { return IntPolynomial::variable(n, i); }
IntPolynomial cst(std::size_t n, long c) { return IntPolynomial::constant(n, c); }

using testgen::linear;
using testgen::planted_rank_cubic;
using testgen::random_linear;
using testgen::split_of;

std::vector<Integer> coeffs_of_linear(const IntPolynomial& l) {
  std::vector<Integer> c(l.num_vars(), 0);
  for (const auto& [e, v] : l.terms())
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] == 1) c[i] = v;
  return c;
}

bool proportional(const IntPolynomial& a, const IntPolynomial& b) {
  auto x = coeffs_of_linear(a), y = coeffs_of_linear(b);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[i] * y[j] != x[j] * y[i]) return false;
  return !a.is_zero() && !b.is_zero();
}

}  // namespace

TEST_CASE("decomposition of split cubics") {
  // x1, x2 | y1: C = y1 (x1^2 + x2^2).
  auto c1 = var(3, 2) * (var(3, 0) * var(3, 0) + var(3, 1) * var(3, 1));
  auto d1 = decompose(c1, split_of(2, 1));
  CHECK(d1.F[0] == var(2, 0) * var(2, 0) + var(2, 1) * var(2, 1));
  CHECK(d1.q[0].is_zero());
  CHECK(d1.R.is_zero());

  // x1, x2 | y1, y2: C = y1 x1^2 + y2 x1 x2 + x1 y2^2 + y1^3.
  const std::size_t n = 4;
  auto x1 = var(n, 0), x2 = var(n, 1), y1 = var(n, 2), y2 = var(n, 3);
  auto c2 = y1 * x1 * x1 + y2 * x1 * x2 + x1 * y2 * y2 + y1 * y1 * y1;
  auto d2 = decompose(c2, split_of(2, 2));
  CHECK(d2.F[0] == var(2, 0) * var(2, 0));
  CHECK(d2.F[1] == var(2, 0) * var(2, 1));
  CHECK(d2.q[0] == var(2, 1) * var(2, 1));
  CHECK(d2.q[1].is_zero());
  CHECK(d2.R == var(2, 0) * var(2, 0) * var(2, 0));
  CHECK(d2.reassemble(split_of(2, 2), n) == c2);

  CHECK_THROWS_AS(decompose(x1 * x1 * x1 + y1 * y1 * y1, split_of(2, 2)), forms::DimensionError);
}

TEST_CASE("fibration rank examples") {
  auto c1 = var(3, 2) * (var(3, 0) * var(3, 0) + var(3, 1) * var(3, 1));
  auto f1 = build_fibration(c1, split_of(2, 1));
  CHECK(f1.rank == 2);
  // Hessian 2 y1 I, so the witness is 4 y1^2.
  CHECK(f1.witness_minor == var(1, 0) * var(1, 0) * Integer(4));

  const std::size_t n = 4;
  auto c2 = var(n, 2) * var(n, 0) * var(n, 0) + var(n, 3) * var(n, 0) * var(n, 1);
  auto f2 = build_fibration(c2, split_of(2, 2));
  CHECK(f2.rank == 2);
  // Hessian [[2 y1, y2], [y2, 0]].
  CHECK(f2.witness_minor == -(var(2, 1) * var(2, 1)));

  auto c3 = var(3, 0) * var(3, 2) * var(3, 2) + var(3, 2) * var(3, 2) * var(3, 2);
  auto f3 = build_fibration(c3, split_of(2, 1));
  CHECK(f3.rank == 0);
  CHECK(f3.larger_minors_expanded);
}

TEST_CASE("randomized rank agrees with the planted rank and the symbolic check") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 4 + static_cast<std::size_t>(trial % 5);
    std::size_t h = 1 + static_cast<std::size_t>(testgen::uniform(rng, 0, long(n) - 3));
    std::size_t d = n - h;
    std::size_t k = static_cast<std::size_t>(testgen::uniform(rng, 0, long(d)));
    auto c = planted_rank_cubic(rng, d, h, k);
    auto fd = build_fibration(c, split_of(d, h), 100 + trial);
    CHECK(fd.rank == k);
    CHECK(fd.record.estimate == fd.rank);
    CHECK(fd.all_larger_minors_vanish);
    CHECK(!fd.witness_minor.is_zero());
    if (k < d) CHECK(nonzero_minors(fd.hessian, k + 1).empty());
  }
}

TEST_CASE("linear block certificates") {
  // F1 = x1^2 + x2^2 with three fibre variables: x3 is linear.
  const std::size_t n = 4;
  auto x1 = var(n, 0), x2 = var(n, 1), x3 = var(n, 2), y1 = var(n, 3);
  auto c = y1 * (x1 * x1 + x2 * x2) + x3 * y1 * y1;
  auto fd = build_fibration(c, split_of(3, 1));
  auto block = extract_linear_block(fd);
  CHECK(block.status == BlockStatus::Certified);
  CHECK(block.linear_vars.size() == 1);
  CHECK(block.transformed.degree_in(block.linear_vars) <= 1);

  // Full rank: identity change and no block.
  auto full = extract_linear_block(build_fibration(y1 * (x1 * x1 + x2 * x2 + x3 * x3), split_of(3, 1)));
  CHECK(full.status == BlockStatus::Certified);
  CHECK(full.linear_vars.empty());

  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t d = 3 + static_cast<std::size_t>(trial % 3), h = 1 + static_cast<std::size_t>(trial % 2);
    std::size_t k = static_cast<std::size_t>(testgen::uniform(rng, 1, long(d) - 1));
    auto cubic = planted_rank_cubic(rng, d, h, k);
    auto f = build_fibration(cubic, split_of(d, h));
    auto b = extract_linear_block(f);
    REQUIRE(b.status == BlockStatus::Certified);
    CHECK(b.linear_vars.size() == d - k);
    for (auto i : b.linear_vars)
      for (auto j : b.linear_vars) CHECK(b.transformed.partial(i).partial(j).is_zero());
    CHECK(forms::substitute_linear(cubic, b.change) == b.transformed);
  }

  // Claimed rank 2 for a rank-3 form: the x3 second partial survives.
  const std::size_t m = 5;
  auto bad = var(m, 3) * (var(m, 0) * var(m, 0) + var(m, 1) * var(m, 1)) + var(m, 4) * var(m, 2) * var(m, 2);
  auto fb = build_fibration(bad, split_of(3, 2));
  CHECK(fb.rank == 3);
  fb.rank = 2;
  auto vb = extract_linear_block(fb);
  CHECK(vb.status == BlockStatus::PreconditionViolated);
  CHECK(vb.detail.find("minor") != std::string::npos);
}

TEST_CASE("semidefinite product quadratic part detection") {
  const std::size_t n = 6;
  IntPolynomial sq(n), mixed(n);
  for (std::size_t i = 0; i < 5; ++i) {
    sq += var(n, i) * var(n, i);
    mixed += var(n, i) * var(n, i) * Integer(i == 1 ? -1 : 1);
  }
  auto yes = detect_semidefinite_product(build_fibration(var(n, 5) * sq, split_of(5, 1)));
  CHECK(yes.holds);
  CHECK(yes.l == var(1, 0));
  CHECK(yes.definite_on_support);
  CHECK(yes.certificate_verified);

  auto indefinite = detect_semidefinite_product(build_fibration(var(n, 5) * mixed, split_of(5, 1)));
  CHECK_FALSE(indefinite.holds);
  CHECK(indefinite.inertia == forms::Inertia{5, 4, 1});

  // diag(y1, y2): entries are not proportional.
  const std::size_t m = 4;
  auto diag = var(m, 2) * var(m, 0) * var(m, 0) + var(m, 3) * var(m, 1) * var(m, 1);
  CHECK_FALSE(detect_semidefinite_product(build_fibration(diag, split_of(2, 2))).holds);

  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t d = 2 + static_cast<std::size_t>(trial % 4), h = 1 + static_cast<std::size_t>(trial % 3);
    std::size_t nn = d + h;
    auto l0 = random_linear(rng, nn, h, d, 5);
    IntPolynomial F0(nn);
    const long sign = trial % 2 ? -1 : 1;
    for (std::size_t j = 0; j < 1 + static_cast<std::size_t>(trial % 3); ++j) {
      auto L = random_linear(rng, nn, d, 0, 3);
      F0 += L * L * Integer(sign);
    }
    auto c = l0 * F0;
    for (std::size_t j = 0; j < d; ++j) c += var(nn, j) * random_linear(rng, nn, h, d, 2) * random_linear(rng, nn, h, d, 2);
    auto fd = build_fibration(c, split_of(d, h));
    auto r = detect_semidefinite_product(fd);
    CHECK(r.holds);
    CHECK(r.certificate_verified);
    std::vector<std::size_t> xmap, ymap;
    for (std::size_t i = 0; i < d; ++i) xmap.push_back(i);
    for (std::size_t i = 0; i < h; ++i) ymap.push_back(d + i);
    CHECK(r.l.embed(nn, ymap) * r.F.embed(nn, xmap) == l0 * F0);
    CHECK(proportional(r.l.embed(nn, ymap), l0));
  }
}

TEST_CASE("indefinite witnesses") {
  // y1 (x1^2 + x2^2) + 2 y2 x1 x2: the point (0, 1) gives Hessian [[0, 2], [2, 0]].
  const std::size_t n = 4;
  auto c = var(n, 2) * (var(n, 0) * var(n, 0) + var(n, 1) * var(n, 1)) + var(n, 3) * var(n, 0) * var(n, 1) * Integer(2);
  auto fd = build_fibration(c, split_of(2, 2));
  auto at = check_indefinite_point(fd, {Integer(0), Integer(1)});
  REQUIRE(at);
  CHECK(*at == forms::Inertia{2, 1, 1});
  CHECK_FALSE(check_indefinite_point(fd, {Integer(1), Integer(0)}));
  auto w = indefinite_witness(fd);
  CHECK(check_indefinite_point(fd, w.point));
  CHECK(w.box_radius > 0);

  auto diag = var(n, 2) * var(n, 0) * var(n, 0) + var(n, 3) * var(n, 1) * var(n, 1);
  auto wd = indefinite_witness(build_fibration(diag, split_of(2, 2)));
  CHECK(wd.inertia == forms::Inertia{2, 1, 1});
  CHECK(wd.point[0] * wd.point[1] < 0);

  auto product = var(3, 2) * (var(3, 0) * var(3, 0) + var(3, 1) * var(3, 1));
  CHECK_THROWS_AS(indefinite_witness(build_fibration(product, split_of(2, 1))), std::domain_error);
}

TEST_CASE("linear factors of forms") {
  const std::size_t n = 3;
  auto y1 = var(n, 0), y2 = var(n, 1), y3 = var(n, 2);
  auto f = linear_factors(y1 * y2 * (y1 + y2));
  CHECK(f.size() == 3);
  CHECK(linear_factors(y1 * y1 - y2 * y2 * Integer(2)).empty());
  auto p = (y1 * Integer(2) + y2 * Integer(3)) * (y1 - y3) * (y2 + y3 * Integer(5)) * (y2 + y3 * Integer(5)) *
           (y1 * y1 + y2 * y2 + y3 * y3);
  auto g = linear_factors(p);
  CHECK(g.size() == 3);
  for (const auto& l : g) CHECK(forms::exact_divide(p, l));

  // Planted factors: every one is recovered, up to sign and content.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t h = 2 + static_cast<std::size_t>(trial % 3);
    std::vector<IntPolynomial> planted;
    IntPolynomial prod = cst(h, 1);
    for (int k = 0; k < 1 + trial % 3; ++k) {
      auto l = random_linear(rng, h, h, 0, 6);
      planted.push_back(l);
      prod *= l;
    }
    IntPolynomial irreducible = var(h, 0) * var(h, 0) * Integer(3) + var(h, 1) * var(h, 1) * Integer(5);
    prod *= irreducible;
    auto found = linear_factors(prod);
    for (const auto& l : planted)
      CHECK(std::any_of(found.begin(), found.end(), [&](const IntPolynomial& x) { return proportional(x, l); }));
    for (const auto& x : found) CHECK(forms::exact_divide(prod, x));
  }
}

TEST_CASE("common linear factor of the parameter quadrics") {
  // x1..x3 | y1..y3, C = sum x_i y1 l_i(y).
  const std::size_t n = 6;
  auto Y = [&](std::size_t i) { return var(n, 3 + i); };
  auto c = var(n, 0) * Y(0) * (Y(0) + Y(1)) + var(n, 1) * Y(0) * (Y(1) - Y(2)) + var(n, 2) * Y(0) * Y(2);
  auto fd = build_fibration(c, split_of(3, 3, forms::FibrationMode::PiPrime));
  auto cf = detect_common_linear_factor_Qi(fd);
  REQUIRE(cf);
  CHECK(cf->l == var(3, 0));

  auto coprime = var(n, 0) * (Y(0) * Y(0) + Y(1) * Y(1) + Y(2) * Y(2)) +
                 var(n, 1) * (Y(0) * Y(1) + Y(2) * Y(2)) + var(n, 2) * (Y(0) * Y(0) - Y(1) * Y(2) * Integer(3));
  CHECK_FALSE(detect_common_linear_factor_Qi(build_fibration(coprime, split_of(3, 3, forms::FibrationMode::PiPrime))));

  auto only_r = Y(0) * Y(0) * Y(1);
  CHECK_THROWS_AS(detect_common_linear_factor_Qi(build_fibration(only_r, split_of(3, 3, forms::FibrationMode::PiPrime))),
                  forms::DimensionError);
}

TEST_CASE("rank-2 bundle classification") {
  // Psi = sum x_i psi_i(y) with 3 x and 3 y variables; polynomials below are in y.
  const std::size_t h = 3;
  auto y1 = var(h, 0), y2 = var(h, 1), y3 = var(h, 2);
  QuadricBundle exps{{(y1 + y2) * (y1 - y2), IntPolynomial(h), (y1 + y2) * y3}, h};
  auto e = classify_rank2_bundle(exps);
  CHECK(e.rank_over_K == 2);
  CHECK(e.shape == Rank2Shape::FactoredProduct);
  CHECK(e.kappa == 1);
  CHECK(e.identity_verified);
  CHECK(e.delta_relations_verified);
  CHECK(proportional(e.factor, y1 + y2));
  CHECK_FALSE(e.x_nondegenerate);

  QuadricBundle two{{y1 * y1, y1 * y2, y2 * y2}, h};
  auto o = classify_rank2_bundle(two);
  CHECK(o.rank_over_K == 2);
  CHECK(o.shape == Rank2Shape::TwoForms);
  CHECK(o.identity_verified);

  QuadricBundle three{{y1 * y1, y2 * y2, y3 * y3}, h};
  auto g = classify_rank2_bundle(three);
  CHECK(g.rank_over_K == 3);
  CHECK(g.shape == Rank2Shape::GeometricallyIntegral);
  CHECK(g.x_nondegenerate);
}

TEST_CASE("rank-2 bundles built in the product shape round-trip") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t v = 4, h = 3 + static_cast<std::size_t>(trial % 3), n = v + h;
    const std::size_t l = 3 + static_cast<std::size_t>(testgen::uniform(rng, 0, long(h) - 3));
    // kappa = p/q, zero on every fifth trial.
    long p = trial % 5 == 0 ? 0 : testgen::uniform(rng, -4, 4);
    if (trial % 5 != 0 && p == 0) p = 1;
    long q = testgen::uniform(rng, 1, 3);
    auto Y = [&](std::size_t i) { return var(n, v + i); };
    auto a11 = random_linear(rng, n, v, 0, 3);
    IntPolynomial inner = a11 * (Y(0) * Integer(q) - Y(1) * Integer(p));
    for (std::size_t i = 2; i < l; ++i) inner += random_linear(rng, n, v, 0, 3) * Y(i) * Integer(q);
    IntPolynomial psi0 = (Y(0) * Integer(q) + Y(1) * Integer(p)) * inner;
    // Random unimodular-ish change of y.
    IntMatrix t;
    do {
      t.assign(h, std::vector<Integer>(h, 0));
      for (auto& row : t)
        for (auto& x : row) x = testgen::uniform(rng, -2, 2);
    } while (forms::integer_determinant(t) == 0);
    std::vector<IntPolynomial> images;
    for (std::size_t i = 0; i < n; ++i) {
      if (i < v) {
        images.push_back(var(n, i));
        continue;
      }
      IntPolynomial im(n);
      for (std::size_t k = 0; k < h; ++k) im += Y(k) * t[i - v][k];
      images.push_back(im);
    }
    auto psi = psi0.compose(images);
    QuadricBundle b{{}, h};
    for (std::size_t j = 0; j < v; ++j) {
      std::vector<std::size_t> vars{j};
      auto coeff = psi.partial(j);
      std::vector<std::size_t> drop;
      for (std::size_t i = 0; i < v; ++i) drop.push_back(i);
      std::vector<Integer> zeros(v, 0);
      auto only_y = coeff.specialize(drop, zeros);
      std::vector<std::size_t> idx;
      for (std::size_t i = v; i < n; ++i) idx.push_back(i);
      // Move y back to h variables.
      IntPolynomial psij(h);
      for (const auto& [ex, cval] : only_y.terms()) {
        forms::Exponent e(ex.begin() + long(v), ex.end());
        psij.add_term(e, cval);
      }
      b.psi.push_back(psij);
    }
    REQUIRE(b.as_polynomial() == psi);
    auto r = classify_rank2_bundle(b);
    CHECK(r.rank_over_K == 2);
    CHECK(r.delta_relations_verified);
    if (l == 3 && p == 0) {
      // y1 (a11 y1 + a13 y3) only involves two y-forms.
      CHECK(r.shape == Rank2Shape::TwoForms);
    } else {
      CHECK(r.shape == Rank2Shape::FactoredProduct);
      CHECK(r.identity_verified);
      CHECK(r.alarm.empty());
      CHECK(((p == 0) == (r.kappa == 0)));
    }
    CHECK(r.identity_verified);
  }
}

TEST_CASE("rank-2 bundle outside both product shapes raises the alarm") {
  // Psi = y1 (x1 y1 + x2 y2 + x3 y3 + x4 (y1 + y2 + y3)).
  const std::size_t h = 3;
  auto y1 = var(h, 0), y2 = var(h, 1), y3 = var(h, 2);
  QuadricBundle b{{y1 * y1, y1 * y2, y1 * y3, y1 * (y1 + y2 + y3)}, h};
  auto r = classify_rank2_bundle(b);
  CHECK(r.rank_over_K == 2);
  CHECK(r.delta_relations_verified);
  CHECK(r.shape == Rank2Shape::None);
  CHECK_FALSE(r.alarm.empty());
}

TEST_CASE("order-3 minors with a common linear factor") {
  // Hessian 2 y1 I_5 + 2 y2 (E12 + E21).
  const std::size_t n = 7;
  IntPolynomial c(n);
  for (std::size_t i = 0; i < 5; ++i) c += var(n, 5) * var(n, i) * var(n, i);
  c += var(n, 6) * var(n, 0) * var(n, 1) * Integer(2);
  auto fd = build_fibration(c, split_of(5, 2));
  auto r = order3_minor_common_factor(fd);
  CHECK(r.status == FactorStatus::LinearFactor);
  CHECK(r.factor == var(2, 0));
  CHECK(r.slice_rank_verified);
  CHECK(r.codim.codim_estimate == 1);
  for (const auto& m : nonzero_minors(fd.hessian, 3)) CHECK(forms::exact_divide(m.value, r.factor));

  // Generic bundle: no common factor, and the rank <= 2 locus has codimension at least 2.
  std::mt19937_64 rng(8);
  auto g = planted_rank_cubic(rng, 5, 3, 5);
  auto fg = build_fibration(g, split_of(5, 3));
  auto rg = order3_minor_common_factor(fg);
  CHECK(rg.status == FactorStatus::None);
  CHECK(rg.codim.codim_estimate >= 2);

  auto low = var(3, 2) * (var(3, 0) * var(3, 0) + var(3, 1) * var(3, 1));
  CHECK_THROWS_AS(order3_minor_common_factor(build_fibration(low, split_of(2, 1))), std::domain_error);
}

TEST_CASE("singular locus probes") {
  const std::size_t m = 3;
  auto sq = var(m, 0) * var(m, 0) + var(m, 1) * var(m, 1) + var(m, 2) * var(m, 2);
  CHECK(singular_locus_dim_probe(sq).estimate == 0);
  auto x1x2 = var(2, 0) * var(2, 1);
  auto probe = singular_locus_dim_probe(x1x2 * x1x2);
  CHECK(probe.estimate == 1);
  // Affine gradient zeros of (x1 x2)^2 are the two axes: 2p - 1 points.
  for (std::size_t i = 0; i < probe.primes.size(); ++i) CHECK(probe.counts[i] == 2 * probe.primes[i] - 1);
}

TEST_CASE("low-rank specializations") {
  // 3 x 3 matrices in 5 variables.
  const std::size_t k = 5;
  auto X = [&](std::size_t i) { return var(k, i); };
  PolyMatrix rank2{{X(0), X(1), IntPolynomial(k)}, {X(1), X(2), IntPolynomial(k)},
                   {IntPolynomial(k), IntPolynomial(k), IntPolynomial(k)}};
  auto d = low_rank_specialization_count(rank2, k, 2);
  CHECK(d.degenerate);
  CHECK(d.count == 3125);

  PolyMatrix generic{{X(0), X(1), X(2)}, {X(1), X(3), X(4)}, {X(2), X(4), X(0) + X(3)}};
  CHECK(low_rank_specialization_count(generic, k, 0).count == 1);
  for (long R : {1L, 2L}) {
    // Oracle: the 3 x 3 determinant at every box point.
    long direct = 0;
    std::vector<long> x(k, -R);
    while (true) {
      std::vector<Integer> xi(x.begin(), x.end());
      if (forms::integer_determinant(forms::evaluate_matrix(generic, xi)) == 0) ++direct;
      std::size_t i = 0;
      while (i < k && x[i] == R) x[i++] = -R;
      if (i == k) break;
      ++x[i];
    }
    CHECK(low_rank_specialization_count(generic, k, R).count == direct);
  }
}

TEST_CASE("predicted exponents") {
  const Rational eps0(0);
  auto a = predicted_exponents(39, 13, 20, eps0, ShapeTag::Auto);
  CHECK(a.beta == Rational(152, 25) - 2);
  CHECK(a.alpha == 4);
  CHECK(a.exponent == 30);
  CHECK(a.warnings.empty());

  auto g = predicted_exponents(20, 10, 10, eps0, ShapeTag::SemidefiniteProduct);
  CHECK(g.gamma == Rational(5, 2));
  CHECK(g.exponent == Rational(25, 2));

  const Rational eps(1, 100);
  auto d = predicted_exponents(20, 8, 12, eps, ShapeTag::IndefiniteBundle);
  CHECK(d.delta == Rational(126, 37) - 2 - eps);

  auto lb = predicted_exponents(20, 8, 5, eps, ShapeTag::LinearBlock);
  CHECK(lb.exponent == Rational(17) - eps);
  CHECK(predicted_exponents(40, 7, 12, eps, ShapeTag::Auto).warnings.size() == 1);
  CHECK_THROWS(predicted_exponents(5, 5, 0, eps, ShapeTag::Auto));

  for (long h = 10; h <= 13; ++h)
    for (long n = 39; n <= 60; ++n) {
      auto p = predicted_exponents(n, h, n - h, eps, ShapeTag::Auto);
      CHECK(Rational(n - h) + p.alpha >= Rational(n - 9));
    }
}

TEST_CASE("shape classification assembles the detectors") {
  const std::size_t n = 7;
  IntPolynomial c(n);
  for (std::size_t i = 0; i < 5; ++i) c += var(n, 5) * var(n, i) * var(n, i);
  c += var(n, 0) * var(n, 5) * var(n, 6);
  auto s = classify_shape(build_fibration(c, split_of(5, 2)));
  CHECK(s.product.holds);
  CHECK(s.linear_block_size == 0);
  REQUIRE(s.minor_factor);
  CHECK(s.minor_factor->status == FactorStatus::LinearFactor);
  REQUIRE(s.rank2);
}
