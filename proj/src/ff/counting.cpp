#include "cubicfib/ff/counting.hpp"

#include <numeric>

namespace cubicfib::ff {

using forms::CompiledPolynomial;
using forms::Exponent;

ModDiagonalization diagonalize_mod_p(const forms::RationalMatrix& q, std::int64_t p) {
  if (!q.is_symmetric()) throw forms::DimensionError("diagonalize_mod_p needs a symmetric matrix");
  if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) throw std::domain_error("diagonalize_mod_p needs an odd prime");
  const std::size_t n = q.rows();
  ModMatrix a(n, ModVector(n)), r(n, ModVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    r[i][i] = 1;
    for (std::size_t j = 0; j < n; ++j) a[i][j] = rational_mod(q(i, j), p);
  }
  auto swap_index = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(a[i], a[j]);
    for (std::size_t k = 0; k < n; ++k) std::swap(a[k][i], a[k][j]);
    for (std::size_t k = 0; k < n; ++k) std::swap(r[k][i], r[k][j]);
  };
  auto add_index = [&](std::size_t i, std::size_t j, std::int64_t f) {
    for (std::size_t k = 0; k < n; ++k) a[k][i] = mod_reduce(a[k][i] + mod_mul(f, a[k][j], p), p);
    for (std::size_t k = 0; k < n; ++k) a[i][k] = mod_reduce(a[i][k] + mod_mul(f, a[j][k], p), p);
    for (std::size_t k = 0; k < n; ++k) r[k][i] = mod_reduce(r[k][i] + mod_mul(f, r[k][j], p), p);
  };
  std::size_t k = 0;
  for (; k < n; ++k) {
    std::size_t piv = n;
    for (std::size_t i = k; i < n && piv == n; ++i)
      if (a[i][i]) piv = i;
    if (piv == n) {
      for (std::size_t i = k; i < n && piv == n; ++i)
        for (std::size_t j = i + 1; j < n && piv == n; ++j)
          if (a[i][j]) {
            add_index(i, j, 1);
            piv = i;
          }
      if (piv == n) break;
    }
    swap_index(k, piv);
    std::int64_t inv = mod_inverse(a[k][k], p);
    for (std::size_t i = k + 1; i < n; ++i)
      if (a[i][k]) add_index(i, k, mod_reduce(-mod_mul(a[i][k], inv, p), p));
  }
  ModDiagonalization out{r, ModVector(n), k};
  for (std::size_t i = 0; i < n; ++i) out.D[i] = a[i][i];
  return out;
}

QuadricCount count_quadric_mod_p_closed_form(const QuadraticPolynomial& f, std::int64_t p) {
  if (p < 3 || !is_prime(static_cast<std::uint64_t>(p)))
    throw std::domain_error("closed-form quadric count needs an odd prime");
  const std::size_t m = f.num_vars();
  auto diag = diagonalize_mod_p(f.Q, p);
  const std::size_t r = diag.rank;
  // B' = R^T B.
  ModVector b(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
      b[i] = mod_reduce(b[i] + mod_mul(diag.R[k][i], rational_mod(f.B[k], p), p), p);

  QuadricCount out;
  GaussSumData& g = out.data;
  g.p = p;
  g.m = m;
  g.rank = r;
  g.epsilon = p % 4 == 1 ? EpsilonTag::One : EpsilonTag::I;
  const Integer P = p;
  for (std::size_t i = r; i < m; ++i)
    if (b[i]) g.linear_escape = true;
  if (g.linear_escape) {
    out.total = out.nonsingular = ipow(P, m - 1);
    return out;
  }

  std::int64_t det = 1, c = rational_mod(f.N, p);
  for (std::size_t i = 0; i < r; ++i) {
    det = mod_mul(det, diag.D[i], p);
    // Completing the square removes B'_i^2 / (4 A_i).
    std::int64_t t = mod_mul(mod_mul(b[i], b[i], p), mod_inverse(mod_mul(4, diag.D[i], p), p), p);
    c = mod_reduce(c - t, p);
  }
  g.w = mod_mul(4, c, p);
  g.legendre_det = legendre(det, p);
  g.kappa = g.w == 0;
  if (r % 2 == 0) {
    g.k_even = g.kappa ? Integer(p - 1) : Integer(-1);
  } else {
    g.k_odd_sign = legendre(g.w, p);
  }

  // Direct evaluation through the classical solution count of sum A_i z_i^2 = -c.
  Integer total;
  if (r % 2 == 0) {
    int eta = legendre(mod_mul((r / 2) % 2 ? p - 1 : 1, det, p), p);
    total = ipow(P, m - 1) + eta * g.k_even * ipow(P, m - r / 2 - 1);
  } else {
    int eta = legendre(mod_mul(((r + 1) / 2) % 2 ? p - 1 : 1, mod_mul(det, g.w, p), p), p);
    total = ipow(P, m - 1) + eta * ipow(P, m - (r + 1) / 2);
  }
  out.total = total;
  out.nonsingular = total - (g.kappa ? ipow(P, m - r) : Integer(0));

  if (g.kappa) {
    ModVector z(m, 0);
    for (std::size_t i = 0; i < r; ++i)
      z[i] = mod_reduce(-mod_mul(b[i], mod_inverse(mod_mul(2, diag.D[i], p), p), p), p);
    out.singular_base.assign(m, 0);
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t i = 0; i < m; ++i)
        out.singular_base[k] = mod_reduce(out.singular_base[k] + mod_mul(diag.R[k][i], z[i], p), p);
    for (std::size_t i = r; i < m; ++i) {
      ModVector d(m);
      for (std::size_t k = 0; k < m; ++k) d[k] = diag.R[k][i];
      out.singular_directions.push_back(d);
    }
  }
  return out;
}

Integer assemble_total(const GaussSumData& g) {
  const Integer P = g.p;
  const std::size_t r = g.rank, m = g.m;
  if (g.linear_escape) return ipow(P, m - 1);
  // eps^k for eps = i is i^k; only real powers occur below.
  auto eps_power = [&](std::size_t k) -> int {
    if (g.epsilon == EpsilonTag::One) return 1;
    if (k % 2) throw std::logic_error("odd power of epsilon is not real");
    return (k / 2) % 2 ? -1 : 1;
  };
  if (r % 2 == 0) return ipow(P, m - 1) + eps_power(r) * g.legendre_det * g.k_even * ipow(P, m - r / 2 - 1);
  // eps^r * (eps * sign * sqrt p) * p^{m - r/2 - 1} = eps^{r+1} * sign * p^{m - (r+1)/2}.
  return ipow(P, m - 1) + eps_power(r + 1) * g.legendre_det * g.k_odd_sign * ipow(P, m - (r + 1) / 2);
}

namespace {

bool any_nonzero_mod(const std::vector<CompiledPolynomial>& grads, std::span<const std::size_t> vars,
                     const std::int64_t* x, std::int64_t q) {
  for (auto v : vars)
    if (grads[v].eval_mod(x, q) != 0) return true;
  return false;
}

std::vector<std::size_t> all_vars(std::size_t m) {
  std::vector<std::size_t> v(m);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<CompiledPolynomial> compile_gradient(const IntPolynomial& f) {
  std::vector<CompiledPolynomial> g;
  for (const auto& d : f.gradient()) g.emplace_back(d);
  return g;
}

std::int64_t checked_power(std::int64_t p, unsigned e) {
  __int128 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    r *= p;
    if (r > (static_cast<__int128>(1) << 62)) throw forms::BudgetExceeded("modulus exceeds 2^62");
  }
  return static_cast<std::int64_t>(r);
}

}  // namespace

ModCount count_mod_q_bruteforce(const IntPolynomial& f, std::int64_t q, std::uint64_t budget) {
  if (q < 2) throw std::domain_error("modulus must be at least 2");
  const std::int64_t p = least_prime_factor(q);
  CompiledPolynomial cf(f);
  auto grads = compile_gradient(f);
  auto vars = all_vars(f.num_vars());
  std::uint64_t total = 0, nonsingular = 0;
  for_each_residue(f.num_vars(), q, budget, [&](const ModVector& x) {
    if (cf.eval_mod(x.data(), q) != 0) return;
    ++total;
    if (any_nonzero_mod(grads, vars, x.data(), p)) ++nonsingular;
  });
  return {Integer(static_cast<unsigned long>(total)), Integer(static_cast<unsigned long>(nonsingular))};
}

namespace {

// Roots of f mod p split into nonsingular count and explicit singular roots.
struct RootData {
  Integer nonsingular = 0;
  std::vector<ModVector> singular;
};

RootData roots_mod_p(const IntPolynomial& f, std::int64_t p, std::uint64_t budget) {
  RootData out;
  const std::size_t m = f.num_vars();
  if (p > 2 && f.total_degree() <= 2) {
    auto c = count_quadric_mod_p_closed_form(forms::quadratic_data(f), p);
    out.nonsingular = c.nonsingular;
    if (c.data.kappa) {
      const std::size_t k = c.singular_directions.size();
      for_each_residue(k, p, budget, [&](const ModVector& coef) {
        ModVector x = c.singular_base;
        for (std::size_t d = 0; d < k; ++d)
          for (std::size_t i = 0; i < m; ++i)
            x[i] = mod_reduce(x[i] + mod_mul(coef[d], c.singular_directions[d][i], p), p);
        out.singular.push_back(std::move(x));
      });
    }
    return out;
  }
  CompiledPolynomial cf(f);
  auto grads = compile_gradient(f);
  auto vars = all_vars(m);
  std::uint64_t ns = 0;
  for_each_residue(m, p, budget, [&](const ModVector& x) {
    if (cf.eval_mod(x.data(), p) != 0) return;
    if (any_nonzero_mod(grads, vars, x.data(), p)) ++ns;
    else out.singular.push_back(x);
  });
  out.nonsingular = Integer(static_cast<unsigned long>(ns));
  return out;
}

Integer count_recursive(const IntPolynomial& f, std::int64_t p, unsigned t, std::uint64_t budget) {
  const std::size_t m = f.num_vars();
  const Integer P = p;
  if (t == 0) return 1;
  if (f.is_zero()) return ipow(P, static_cast<unsigned long>(m) * t);
  unsigned long e = p_adic_valuation(f.content(), p);
  if (e >= t) return ipow(P, static_cast<unsigned long>(m) * t);
  if (e > 0) {
    Integer pe = ipow(P, e);
    IntPolynomial h(m);
    for (const auto& [ex, c] : f.terms()) h.add_term(ex, c / pe);
    return ipow(P, m * e) * count_recursive(h, p, static_cast<unsigned>(t - e), budget);
  }
  RootData roots = roots_mod_p(f, p, budget);
  Integer total = roots.nonsingular * ipow(P, static_cast<unsigned long>(t - 1) * (m ? m - 1 : 0));
  if (m == 0) return total;
  for (const auto& x0 : roots.singular) {
    std::vector<IntPolynomial> images;
    for (std::size_t i = 0; i < m; ++i)
      images.push_back(IntPolynomial::constant(m, x0[i]) + IntPolynomial::variable(m, i) * P);
    IntPolynomial g = f.compose(images);
    unsigned long eg = g.is_zero() ? t : p_adic_valuation(g.content(), p);
    if (eg >= t) {
      total += ipow(P, static_cast<unsigned long>(m) * (t - 1));
      continue;
    }
    Integer pe = ipow(P, eg);
    IntPolynomial h(m);
    for (const auto& [ex, c] : g.terms()) h.add_term(ex, c / pe);
    total += ipow(P, static_cast<unsigned long>(m) * (eg - 1)) * count_recursive(h, p, static_cast<unsigned>(t - eg), budget);
  }
  return total;
}

}  // namespace

Integer count_mod_prime_power(const IntPolynomial& f, std::int64_t p, unsigned t, std::uint64_t budget) {
  if (!is_prime(static_cast<std::uint64_t>(p))) throw std::domain_error("count_mod_prime_power needs a prime");
  return count_recursive(f, p, t, budget);
}

Integer count_witnesses(const IntPolynomial& f, std::span<const std::size_t> grad_vars, std::int64_t p, unsigned v,
                        std::uint64_t budget) {
  if (v == 0) throw std::domain_error("witness level starts at 1");
  const std::size_t m = f.num_vars();
  if (v == 1 && p > 2 && f.total_degree() <= 2 && grad_vars.size() == m)
    return count_quadric_mod_p_closed_form(forms::quadratic_data(f), p).nonsingular;
  const std::int64_t mod = checked_power(p, 2 * v - 1), pv = checked_power(p, v);
  CompiledPolynomial cf(f);
  auto grads = compile_gradient(f);
  std::uint64_t count = 0;
  for_each_residue(m, mod, budget, [&](const ModVector& x) {
    if (cf.eval_mod(x.data(), mod) == 0 && any_nonzero_mod(grads, grad_vars, x.data(), pv)) ++count;
  });
  return Integer(static_cast<unsigned long>(count));
}

HenselCount hensel_count(const IntPolynomial& f, std::int64_t p, unsigned t, CountMode mode, std::uint64_t budget,
                         unsigned v_max) {
  if (!is_prime(static_cast<std::uint64_t>(p))) throw std::domain_error("hensel_count needs a prime");
  if (t == 0) throw std::domain_error("hensel_count needs t >= 1");
  const std::size_t m = f.num_vars();
  HenselCount out;
  if (mode == CountMode::Exact) {
    out.exact = true;
    double size = std::pow(static_cast<double>(p), static_cast<double>(t * m));
    if (size <= static_cast<double>(budget)) out.value = count_mod_q_bruteforce(f, checked_power(p, t), budget).total;
    else out.value = count_mod_prime_power(f, p, t, budget);
    return out;
  }
  auto vars = all_vars(m);
  out.value = 0;
  for (unsigned v = 1; v <= v_max && 2 * v - 1 <= t; ++v) {
    Integer w = count_witnesses(f, vars, p, v, budget);
    if (w == 0) continue;
    out.v = v;
    out.witnesses = w;
    out.value = w * ipow(Integer(p), static_cast<unsigned long>(t - (2 * v - 1)) * (m - 1));
    break;
  }
  return out;
}

std::optional<PadicWitness> find_padic_nonsingular(const IntPolynomial& f, std::span<const std::size_t> grad_vars,
                                                   std::int64_t p, unsigned v_max, std::uint64_t budget) {
  if (!is_prime(static_cast<std::uint64_t>(p))) throw std::domain_error("find_padic_nonsingular needs a prime");
  for (auto v : grad_vars)
    if (v >= f.num_vars()) throw forms::DimensionError("gradient variable out of range");
  CompiledPolynomial cf(f);
  auto grads = compile_gradient(f);
  for (unsigned v = 1; v <= v_max; ++v) {
    const std::int64_t mod = checked_power(p, 2 * v - 1), pv = checked_power(p, v);
    std::optional<PadicWitness> found;
    struct Found {};
    try {
      for_each_residue(f.num_vars(), mod, budget, [&](const ModVector& x) {
        if (cf.eval_mod(x.data(), mod) == 0 && any_nonzero_mod(grads, grad_vars, x.data(), pv)) {
          found = PadicWitness{p, v, mod, x};
          throw Found{};
        }
      });
    } catch (const Found&) {
    }
    if (found) return found;
  }
  return std::nullopt;
}

ResidueValueCount quadratic_residue_value_count(const IntPolynomial& f, std::int64_t p, std::uint64_t budget) {
  if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) throw std::domain_error("needs an odd prime");
  std::vector<int> chi(static_cast<std::size_t>(p));
  for (std::int64_t a = 0; a < p; ++a) chi[a] = legendre(a, p);
  CompiledPolynomial cf(f);
  std::uint64_t res = 0, non = 0, zero = 0;
  for_each_residue(f.num_vars(), p, budget, [&](const ModVector& x) {
    int c = chi[cf.eval_mod(x.data(), p)];
    if (c > 0) ++res;
    else if (c < 0) ++non;
    else ++zero;
  });
  ResidueValueCount out;
  out.residues = static_cast<unsigned long>(res);
  out.nonresidues = static_cast<unsigned long>(non);
  out.zeros = static_cast<unsigned long>(zero);
  out.character_sum = out.residues - out.nonresidues;
  return out;
}

}  // namespace cubicfib::ff
