#include "doctest.h"
#include "generators.hpp"

#include "cubicfib/forms/matrix.hpp"
#include "cubicfib/forms/polynomial.hpp"
#include "cubicfib/forms/quadratic.hpp"

using namespace cubicfib::forms;

namespace {

IntPolynomial parse(std::size_t n, const std::string& text) { return IntPolynomial::from_text(n, text); }

RationalMatrix mat(std::vector<std::vector<Rational>> rows) { return RationalMatrix::from_rows(rows); }

// Determinant by Leibniz expansion, independent of elimination.
Rational leibniz_det(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  Rational total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    Rational t = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) t *= m(i, perm[i]);
    total += t;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

RationalMatrix random_matrix(std::mt19937_64& rng, std::size_t n, long c, bool symmetric) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = symmetric ? i : 0; j < n; ++j) {
      m(i, j) = testgen::uniform(rng, -c, c);
      if (symmetric) m(j, i) = m(i, j);
    }
  return m;
}

}  // namespace

TEST_CASE("evaluate and gradient of a small polynomial") {
  // x1^2 x2 + 5
  auto p = parse(2, "1 2 1\n5 0 0\n");
  std::vector<Integer> pt{3, 4};
  CHECK(p.evaluate(pt) == 41);
  auto g = p.gradient();
  CHECK(g[0].evaluate(pt) == 24);
  CHECK(g[1].evaluate(pt) == 9);
}

TEST_CASE("text serialization is canonical and round-trips") {
  auto p = parse(3, "5 0 0 0\n-2 1 1 1\n1 3 0 0\n7 0 2 1\n");
  std::string t = p.to_text();
  CHECK(t == "1 3 0 0\n-2 1 1 1\n7 0 2 1\n5 0 0 0\n");
  CHECK(IntPolynomial::from_text(3, t) == p);
  CHECK_THROWS_AS(IntPolynomial::from_text(3, "1 2 1\n"), ParseError);
  CHECK_THROWS_AS(IntPolynomial::from_text(2, "x 1 1\n"), ParseError);
}

TEST_CASE("adjugate and determinant") {
  auto r = adjugate_and_det(mat({{1, 2}, {3, 4}}));
  CHECK(r.determinant == -2);
  CHECK(r.adjugate == mat({{4, -2}, {-3, 1}}));
  auto s = adjugate_and_det(mat({{1, 2}, {2, 4}}));
  CHECK(s.determinant == 0);
  CHECK(s.adjugate == mat({{4, -2}, {-2, 1}}));
}

TEST_CASE("signature of a hyperbolic plane") {
  RationalMatrix h = mat({{0, Rational(1, 2)}, {Rational(1, 2), 0}});
  auto in = rank_signature_over_Q(h);
  CHECK(in.rank == 2);
  CHECK(in.positive == 1);
  CHECK(in.negative == 1);
}

TEST_CASE("congruence diagonalization reproduces the matrix") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + trial % 6;
    RationalMatrix q = random_matrix(rng, n, 3, true);
    if (trial % 5 == 0) {
      for (std::size_t i = 0; i < n; ++i) q(i, i) = 0;
    }
    auto d = diagonalize_congruence(q);
    RationalMatrix diag = d.transform.transpose() * q * d.transform;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(diag(i, j) == (i == j ? d.diagonal[i] : Rational(0)));
    CHECK(d.transform.determinant() != 0);
    auto in = rank_signature_over_Q(q);
    CHECK(in.rank == q.rank());
  }
}

TEST_CASE("adjugate identity and determinant agree with Leibniz expansion") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 1 + trial % 5;
    RationalMatrix m = random_matrix(rng, n, 4, false);
    if (trial % 4 == 0 && n > 1)
      for (std::size_t j = 0; j < n; ++j) m(n - 1, j) = m(0, j) * 2;
    auto r = adjugate_and_det(m);
    CHECK(r.determinant == leibniz_det(m));
    RationalMatrix prod = m * r.adjugate;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(prod(i, j) == (i == j ? r.determinant : Rational(0)));
    IntMatrix im(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) im[i][j] = m(i, j).get_num();
    CHECK(Rational(integer_determinant(im)) == r.determinant);
    CHECK(integer_rank(im) == m.rank());
  }
}

TEST_CASE("quadratic data round-trips through the polynomial form") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t m = 1 + trial % 5;
    auto p = testgen::random_quadratic(rng, m, 5);
    auto q = quadratic_data(p);
    CHECK(q.to_polynomial() == p);
    CHECK(q.Q.is_symmetric());
    auto x = testgen::random_vector(rng, m, 9);
    CHECK(q.evaluate(x) == p.evaluate(x));
  }
  CHECK_THROWS_AS(quadratic_data(parse(1, "1 3\n")), DimensionError);
}

TEST_CASE("linear substitution composed with its inverse scales the polynomial") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + trial % 3;
    auto p = testgen::random_form(rng, n, 3, 4, 0.6);
    if (p.is_zero()) continue;
    LinearChange t;
    t.matrix.assign(n, std::vector<Integer>(n));
    do {
      for (auto& row : t.matrix)
        for (auto& v : row) v = testgen::uniform(rng, -3, 3);
      t.denominator = testgen::uniform(rng, 1, 3);
    } while (integer_determinant(t.matrix) == 0);
    auto inv = inverse(t);
    auto q = substitute_linear(substitute_linear(p, t), inv);
    // p(T T^{-1} x) times the cleared denominators.
    Integer scale = 1;
    for (int k = 0; k < 3; ++k) scale *= t.denominator * inv.denominator;
    CHECK(q == p * scale);
  }
  LinearChange sing;
  sing.matrix = {{1, 2}, {2, 4}};
  CHECK_THROWS_AS(inverse(sing), std::domain_error);
}

TEST_CASE("variable split validation") {
  auto c = parse(3, "1 2 0 1\n1 0 1 2\n");
  VariableSplit s{{0, 1}, {2}, FibrationMode::Pi};
  CHECK_NOTHROW(s.validate_for(c));
  VariableSplit bad{{0}, {1, 2}, FibrationMode::PiPrime};
  CHECK_THROWS_AS(bad.validate_for(c), DimensionError);
  VariableSplit overlap{{0, 1}, {1, 2}, FibrationMode::Pi};
  CHECK_THROWS_AS(overlap.validate(3), DimensionError);
}

TEST_CASE("exact division and symbolic determinants") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = testgen::random_form(rng, 3, 2, 3, 0.7);
    auto b = testgen::random_form(rng, 3, 1, 3);
    if (b.is_zero() || a.is_zero()) continue;
    auto q = exact_divide(a * b, b);
    REQUIRE(q.has_value());
    CHECK(*q == a);
  }
  auto x = IntPolynomial::variable(2, 0), y = IntPolynomial::variable(2, 1);
  CHECK_FALSE(exact_divide(x * x + y, x).has_value());

  // det [[y1, y2],[y2, y1]] = y1^2 - y2^2.
  PolyMatrix m{{x, y}, {y, x}};
  CHECK(symbolic_determinant(m) == x * x - y * y);
  // Symbolic determinant agrees with evaluation at random points.
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 2 + trial % 3;
    PolyMatrix pm(n);
    for (auto& row : pm)
      for (std::size_t j = 0; j < n; ++j) row.push_back(testgen::random_form(rng, 2, 1, 3));
    auto det = symbolic_determinant(pm);
    auto pt = testgen::random_vector(rng, 2, 20);
    CHECK(det.evaluate(pt) == integer_determinant(evaluate_matrix(pm, pt)));
    auto sr = symbolic_rank(pm);
    CHECK(sr.rank == (det.is_zero() ? sr.rank : n));
  }
  PolyMatrix low{{x, y, x + y}, {x, y, x + y}, {y, x, x + y}};
  auto sr = symbolic_rank(low);
  CHECK(sr.rank == 2);
  CHECK_FALSE(symbolic_determinant(poly_submatrix(low, sr.pivot_rows, sr.pivot_cols)).is_zero());
}
