#include "cubicfib/forms/matrix.hpp"

#include <numeric>
#include <utility>

namespace cubicfib::forms {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
  RationalMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw DimensionError("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

bool RationalMatrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& o) const {
  if (cols_ != o.rows_) throw DimensionError("matrix product shape mismatch");
  RationalMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
    }
  return r;
}

std::vector<Rational> RationalMatrix::operator*(const std::vector<Rational>& v) const {
  if (v.size() != cols_) throw DimensionError("matrix-vector shape mismatch");
  std::vector<Rational> r(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
  return r;
}

bool RationalMatrix::operator==(const RationalMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

RationalMatrix RationalMatrix::submatrix(const std::vector<std::size_t>& rows,
                                         const std::vector<std::size_t>& cols) const {
  RationalMatrix s(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows.at(i), cols.at(j));
  return s;
}

Rational RationalMatrix::determinant() const {
  if (!is_square()) throw DimensionError("determinant of a non-square matrix");
  RationalMatrix a = *this;
  Rational det = 1;
  const std::size_t n = rows_;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

std::size_t RationalMatrix::rank() const {
  RationalMatrix a = *this;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t p = r;
    while (p < rows_ && a(p, c) == 0) ++p;
    if (p == rows_) continue;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(a(p, j), a(r, j));
    for (std::size_t i = r + 1; i < rows_; ++i) {
      if (a(i, c) == 0) continue;
      Rational f = a(i, c) / a(r, c);
      for (std::size_t j = c; j < cols_; ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

std::optional<RationalMatrix> RationalMatrix::inverse() const {
  if (!is_square()) throw DimensionError("inverse of a non-square matrix");
  const std::size_t n = rows_;
  RationalMatrix a = *this, inv = identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return std::nullopt;
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a(p, j), a(k, j));
      std::swap(inv(p, j), inv(k, j));
    }
    Rational piv = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      Rational f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

Integer RationalMatrix::common_denominator() const {
  Integer l = 1;
  for (const auto& x : a_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

CongruenceDiagonalization diagonalize_congruence(const RationalMatrix& q) {
  if (!q.is_symmetric()) throw DimensionError("congruence diagonalization needs a symmetric matrix");
  const std::size_t n = q.rows();
  RationalMatrix a = q, t = RationalMatrix::identity(n);

  auto swap_index = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < n; ++k) std::swap(a(i, k), a(j, k));
    for (std::size_t k = 0; k < n; ++k) std::swap(a(k, i), a(k, j));
    for (std::size_t k = 0; k < n; ++k) std::swap(t(k, i), t(k, j));
  };
  // Basis change e_i <- e_i + f e_j.
  auto add_index = [&](std::size_t i, std::size_t j, const Rational& f) {
    for (std::size_t k = 0; k < n; ++k) a(k, i) += f * a(k, j);
    for (std::size_t k = 0; k < n; ++k) a(i, k) += f * a(j, k);
    for (std::size_t k = 0; k < n; ++k) t(k, i) += f * t(k, j);
  };

  std::size_t k = 0;
  for (; k < n; ++k) {
    std::size_t piv = n;
    for (std::size_t i = k; i < n; ++i)
      if (a(i, i) != 0) {
        piv = i;
        break;
      }
    if (piv == n) {
      bool found = false;
      for (std::size_t i = k; i < n && !found; ++i)
        for (std::size_t j = i + 1; j < n && !found; ++j)
          if (a(i, j) != 0) {
            add_index(i, j, 1);
            piv = i;
            found = true;
          }
      if (!found) break;
    }
    swap_index(k, piv);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      add_index(i, k, -a(i, k) / a(k, k));
    }
  }
  CongruenceDiagonalization out{t, {}};
  for (std::size_t i = 0; i < n; ++i) out.diagonal.push_back(a(i, i));
  return out;
}

Inertia rank_signature_over_Q(const RationalMatrix& q) {
  auto d = diagonalize_congruence(q);
  Inertia in;
  for (const auto& v : d.diagonal) {
    if (v > 0) ++in.positive;
    if (v < 0) ++in.negative;
  }
  in.rank = in.positive + in.negative;
  return in;
}

AdjugateResult adjugate_and_det(const RationalMatrix& m) {
  if (!m.is_square()) throw DimensionError("adjugate of a non-square matrix");
  const std::size_t n = m.rows();
  RationalMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return {adj, m(0, 0)};
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::size_t> rows, cols;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i) rows.push_back(k);
        if (k != j) cols.push_back(k);
      }
      Rational c = m.submatrix(rows, cols).determinant();
      adj(j, i) = ((i + j) % 2) ? Rational(-c) : c;
    }
  }
  return {adj, m.determinant()};
}

static std::size_t bareiss_rank(IntMatrix& a, Integer* det) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::size_t r = 0;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(a[p], a[r]);
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        a[i][j] = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  if (det) *det = (r == rows && rows == cols) ? Integer(sign * prev) : Integer(0);
  return r;
}

std::size_t integer_rank(IntMatrix m) { return bareiss_rank(m, nullptr); }

Integer integer_determinant(IntMatrix m) {
  if (m.empty()) return 1;
  if (m.size() != m[0].size()) throw DimensionError("determinant of a non-square matrix");
  Integer d;
  bareiss_rank(m, &d);
  return d;
}

static IntPolynomial divide_exactly(const IntPolynomial& a, const IntPolynomial& b) {
  auto q = exact_divide(a, b);
  if (!q) throw std::logic_error("fraction-free elimination produced an inexact division");
  return *q;
}

IntPolynomial symbolic_determinant(PolyMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) throw DimensionError("determinant of an empty polynomial matrix");
  const std::size_t vars = a[0][0].num_vars();
  for (auto& row : a)
    if (row.size() != n) throw DimensionError("determinant of a non-square polynomial matrix");
  IntPolynomial prev = IntPolynomial::constant(vars, 1);
  bool negate = false;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][k].is_zero()) ++p;
    if (p == n) return IntPolynomial(vars);
    if (p != k) {
      std::swap(a[p], a[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = divide_exactly(a[k][k] * a[i][j] - a[i][k] * a[k][j], prev);
      a[i][k] = IntPolynomial(vars);
    }
    prev = a[k][k];
  }
  return negate ? -prev : prev;
}

SymbolicRank symbolic_rank(const PolyMatrix& m) {
  SymbolicRank out;
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  if (!rows || !cols) return out;
  const std::size_t vars = m[0][0].num_vars();
  PolyMatrix a = m;
  std::vector<std::size_t> origin(rows);
  std::iota(origin.begin(), origin.end(), 0);
  IntPolynomial prev = IntPolynomial::constant(vars, 1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    std::swap(origin[p], origin[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j)
        a[i][j] = divide_exactly(a[r][c] * a[i][j] - a[i][c] * a[r][j], prev);
      a[i][c] = IntPolynomial(vars);
    }
    prev = a[r][c];
    out.pivot_rows.push_back(origin[r]);
    out.pivot_cols.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

PolyMatrix poly_submatrix(const PolyMatrix& m, const std::vector<std::size_t>& rows,
                          const std::vector<std::size_t>& cols) {
  PolyMatrix s(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (auto c : cols) s[i].push_back(m.at(rows[i]).at(c));
  return s;
}

IntMatrix evaluate_matrix(const PolyMatrix& m, std::span<const Integer> point) {
  IntMatrix r(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (const auto& e : m[i]) r[i].push_back(e.evaluate(point));
  return r;
}

}  // namespace cubicfib::forms
