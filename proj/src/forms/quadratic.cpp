#include "cubicfib/forms/quadratic.hpp"

#include <algorithm>
#include <set>

namespace cubicfib::forms {

Integer QuadraticPolynomial::evaluate(std::span<const Integer> x) const {
  const std::size_t m = num_vars();
  if (x.size() != m) throw DimensionError("point has wrong dimension");
  Rational v = N;
  for (std::size_t i = 0; i < m; ++i) {
    v += B[i] * x[i];
    for (std::size_t j = 0; j < m; ++j) v += Q(i, j) * x[i] * x[j];
  }
  if (v.get_den() != 1) throw std::logic_error("quadratic polynomial took a non-integer value");
  return v.get_num();
}

IntPolynomial QuadraticPolynomial::to_polynomial() const {
  const std::size_t m = num_vars();
  IntPolynomial p(m);
  for (std::size_t i = 0; i < m; ++i) {
    Exponent e(m, 0);
    e[i] = 2;
    if (Q(i, i).get_den() != 1) throw std::logic_error("diagonal entry is not integral");
    p.add_term(e, Q(i, i).get_num());
    for (std::size_t j = i + 1; j < m; ++j) {
      Rational c = 2 * Q(i, j);
      if (c.get_den() != 1) throw std::logic_error("off-diagonal entry is not half-integral");
      Exponent f(m, 0);
      f[i] = f[j] = 1;
      p.add_term(f, c.get_num());
    }
    Exponent l(m, 0);
    l[i] = 1;
    p.add_term(l, B[i]);
  }
  p.add_term(Exponent(m, 0), N);
  return p;
}

IntMatrix QuadraticPolynomial::hessian() const {
  const std::size_t m = num_vars();
  IntMatrix h(m, std::vector<Integer>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Rational v = 2 * Q(i, j);
      h[i][j] = v.get_num();
    }
  return h;
}

QuadraticPolynomial quadratic_data(const IntPolynomial& p) {
  if (p.total_degree() > 2) throw DimensionError("quadratic_data needs total degree at most 2");
  const std::size_t m = p.num_vars();
  QuadraticPolynomial q{RationalMatrix(m, m), std::vector<Integer>(m, 0), 0};
  for (const auto& [e, c] : p.terms()) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i)
      for (unsigned k = 0; k < e[i]; ++k) idx.push_back(i);
    if (idx.empty()) {
      q.N = c;
    } else if (idx.size() == 1) {
      q.B[idx[0]] = c;
    } else if (idx[0] == idx[1]) {
      q.Q(idx[0], idx[0]) = c;
    } else {
      Rational h(c, 2);
      h.canonicalize();
      q.Q(idx[0], idx[1]) = h;
      q.Q(idx[1], idx[0]) = h;
    }
  }
  return q;
}

std::string to_string(FibrationMode mode) { return mode == FibrationMode::Pi ? "pi" : "pi_prime"; }

FibrationMode fibration_mode_from_string(const std::string& s) {
  if (s == "pi") return FibrationMode::Pi;
  if (s == "pi_prime") return FibrationMode::PiPrime;
  throw std::invalid_argument("unknown fibration mode '" + s + "'");
}

void VariableSplit::validate(std::size_t n) const {
  std::set<std::size_t> seen;
  for (auto i : x_indices)
    if (i >= n || !seen.insert(i).second) throw DimensionError("bad or repeated x index");
  for (auto i : y_indices)
    if (i >= n || !seen.insert(i).second) throw DimensionError("bad or repeated y index");
  if (seen.size() != n) throw DimensionError("split does not cover every variable");
  if (x_indices.empty() || y_indices.empty()) throw DimensionError("split needs both x and y variables");
}

void VariableSplit::validate_for(const IntPolynomial& c) const {
  validate(c.num_vars());
  unsigned limit = mode == FibrationMode::Pi ? 2 : 1;
  if (c.degree_in(x_indices) > limit)
    throw DimensionError("form has x-degree " + std::to_string(c.degree_in(x_indices)) + " but mode " +
                         to_string(mode) + " allows at most " + std::to_string(limit));
}

LinearChange LinearChange::identity(std::size_t n) {
  LinearChange t;
  t.matrix.assign(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i) t.matrix[i][i] = 1;
  return t;
}

IntPolynomial substitute_linear(const IntPolynomial& p, const LinearChange& t) {
  const std::size_t n = p.num_vars();
  if (t.dimension() != n) throw DimensionError("linear change has wrong dimension");
  if (t.denominator == 0) throw std::domain_error("zero denominator in linear change");
  std::vector<IntPolynomial> images;
  for (std::size_t i = 0; i < n; ++i) {
    if (t.matrix[i].size() != n) throw DimensionError("linear change is not square");
    IntPolynomial g(n);
    for (std::size_t j = 0; j < n; ++j) {
      Exponent e(n, 0);
      e[j] = 1;
      g.add_term(e, t.matrix[i][j]);
    }
    images.push_back(std::move(g));
  }
  if (t.denominator == 1) return p.compose(images);
  int deg = p.total_degree();
  IntPolynomial out(n);
  for (int d = 0; d <= deg; ++d) {
    IntPolynomial part = p.homogeneous_part(static_cast<unsigned>(d));
    if (part.is_zero()) continue;
    Integer scale;
    mpz_pow_ui(scale.get_mpz_t(), t.denominator.get_mpz_t(), static_cast<unsigned long>(deg - d));
    out += part.compose(images) * scale;
  }
  return out;
}

LinearChange inverse(const LinearChange& t) {
  const std::size_t n = t.dimension();
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = t.matrix[i][j];
  auto adj = adjugate_and_det(m);
  if (adj.determinant == 0) throw std::domain_error("linear change is singular");
  // (M/d)^{-1} = d * adj(M) / det(M).
  Integer det = adj.determinant.get_num();
  LinearChange inv;
  inv.matrix.assign(n, std::vector<Integer>(n));
  Integer g = det;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      inv.matrix[i][j] = adj.adjugate(i, j).get_num() * t.denominator;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), inv.matrix[i][j].get_mpz_t());
    }
  if (det < 0) g = -abs(g);
  else g = abs(g);
  for (auto& row : inv.matrix)
    for (auto& v : row) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  inv.denominator = det / g;
  return inv;
}

LinearChange compose(const LinearChange& outer, const LinearChange& inner) {
  const std::size_t n = outer.dimension();
  if (inner.dimension() != n) throw DimensionError("linear changes have different dimensions");
  LinearChange r;
  r.matrix.assign(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) r.matrix[i][j] += outer.matrix[i][k] * inner.matrix[k][j];
  r.denominator = outer.denominator * inner.denominator;
  return r;
}

}  // namespace cubicfib::forms
