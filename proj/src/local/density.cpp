#include "cubicfib/local/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cubicfib::local {

using ff::ipow;

Rational DensityRecord::value() const {
  Rational v(numerator, denominator);
  v.canonicalize();
  return v;
}

namespace {

void require_prime(std::int64_t p) {
  if (!ff::is_prime(static_cast<std::uint64_t>(p))) throw std::domain_error("local density needs a prime");
}

forms::IntMatrix hessian_of(const IntPolynomial& f) {
  return forms::quadratic_data(f.homogeneous_part(2)).hessian();
}

void combinations(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

Integer minor_gcd(const forms::IntMatrix& h, std::size_t r) {
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<std::size_t> cur;
  combinations(h.size(), r, 0, cur, subsets);
  Integer g = 0;
  for (const auto& rows : subsets)
    for (const auto& cols : subsets) {
      forms::IntMatrix s(r, std::vector<Integer>(r));
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) s[i][j] = h[rows[i]][cols[j]];
      Integer d = forms::integer_determinant(s);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
    }
  return g;
}

}  // namespace

Rational sigma_p(const IntPolynomial& f, std::int64_t p, unsigned t, std::uint64_t budget) {
  return sigma_p_record(f, p, t, budget).value();
}

DensityRecord sigma_p_record(const IntPolynomial& f, std::int64_t p, unsigned t, std::uint64_t budget) {
  require_prime(p);
  if (t == 0) throw std::domain_error("truncation level must be at least 1");
  const std::size_t m = f.num_vars();
  if (m == 0) throw forms::DimensionError("density of a polynomial without variables");
  DensityRecord r;
  r.p = p;
  r.t = t;
  r.numerator = ff::count_mod_prime_power(f, p, t, budget);
  r.denominator = ipow(Integer(p), static_cast<unsigned long>(t) * (m - 1));
  Rational prev = t == 1 ? Rational(1) : sigma_p(f, p, t - 1, budget);
  r.stable = t > 1 && prev == r.value();
  return r;
}

std::vector<Integer> S_pk_extract(const IntPolynomial& f, std::int64_t p, unsigned k_max, std::uint64_t budget) {
  require_prime(p);
  const std::size_t m = f.num_vars();
  std::vector<Integer> out;
  Rational prev = 1;
  for (unsigned k = 1; k <= k_max; ++k) {
    Rational cur = sigma_p(f, p, k, budget);
    Rational s = (cur - prev) * ipow(Integer(p), static_cast<unsigned long>(k) * m);
    if (s.get_den() != 1) throw std::logic_error("exponential sum is not integral");
    out.push_back(s.get_num());
    prev = cur;
  }
  return out;
}

Integer hessian_discriminant(const IntPolynomial& f) { return forms::integer_determinant(hessian_of(f)); }

bool is_good_prime(const IntPolynomial& f, std::int64_t p) {
  if (p == 2) return false;
  Integer d = hessian_discriminant(f);
  return d != 0 && !mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p));
}

std::size_t quadratic_rank(const IntPolynomial& f) { return forms::integer_rank(hessian_of(f)); }

unsigned default_truncation(const IntPolynomial& f, std::int64_t p, unsigned v_max) {
  if (is_good_prime(f, p)) return 2;
  std::vector<std::size_t> vars(f.num_vars());
  std::iota(vars.begin(), vars.end(), 0);
  // Search only the levels whose residue space fits the default budget.
  unsigned feasible = 0;
  while (feasible < v_max &&
         std::pow(double(p), double((2 * feasible + 1) * f.num_vars())) <= double(ff::kDefaultBudget))
    ++feasible;
  if (feasible == 0) return 3;
  auto w = ff::find_padic_nonsingular(f, vars, p, feasible);
  return 2 * (w ? w->v : feasible) + 1;
}

SingularSeries singular_series(const IntPolynomial& f, std::int64_t p_max, std::optional<unsigned> t,
                               std::uint64_t budget) {
  if (f.total_degree() > 2) throw forms::DimensionError("singular series is implemented for quadratics");
  std::size_t r = quadratic_rank(f);
  if (r < 5)
    throw ConvergenceNotCertified("rank " + std::to_string(r) + " < 5: absolute convergence is not certified");
  SingularSeries out{1, {}};
  for (auto p : ff::primes_up_to(p_max)) {
    unsigned level = t ? *t : default_truncation(f, p);
    auto rec = sigma_p_record(f, p, level, budget);
    out.product *= rec.value();
    out.factors.push_back(rec);
  }
  return out;
}

SeriesLowerBound series_lower_bound_certificate(const IntPolynomial& f, std::int64_t p_max, unsigned v_max,
                                                std::uint64_t budget) {
  if (f.total_degree() > 2) throw forms::DimensionError("certificate is implemented for quadratics");
  const std::size_t m = f.num_vars();
  auto h = hessian_of(f);
  std::size_t r = forms::integer_rank(h);
  if (r < 5) throw ConvergenceNotCertified("rank < 5: no lower-bound certificate");
  SeriesLowerBound out;
  out.minor_gcd = minor_gcd(h, r);
  out.special_factor = out.explicit_factor = 1;

  std::vector<std::int64_t> special{2};
  for (const auto& [q, e] : ff::factorize(out.minor_gcd)) {
    if (!q.fits_slong_p()) throw forms::BudgetExceeded("special prime too large");
    if (q != 2) special.push_back(q.get_si());
  }
  std::vector<std::size_t> vars(m);
  std::iota(vars.begin(), vars.end(), 0);
  // Witnesses mod p^{2v-1} lift to at least |S| p^{(t-2v+1)(m-1)} zeros mod p^t.
  for (auto p : special) {
    Rational floor = 0;
    for (unsigned v = 1; v <= v_max; ++v) {
      Integer w = ff::count_witnesses(f, vars, p, v, budget);
      if (w == 0) continue;
      floor = Rational(w, ipow(Integer(p), static_cast<unsigned long>(2 * v - 1) * (m - 1)));
      floor.canonicalize();
      break;
    }
    out.special_factor *= floor;
    out.prime_floors.emplace_back(p, floor);
  }
  for (auto p : ff::primes_up_to(p_max)) {
    if (std::find(special.begin(), special.end(), p) != special.end()) continue;
    auto c = ff::count_quadric_mod_p_closed_form(forms::quadratic_data(f), p);
    Rational floor(c.nonsingular, ipow(Integer(p), m - 1));
    floor.canonicalize();
    out.explicit_factor *= floor;
    out.prime_floors.emplace_back(p, floor);
  }
  // Special primes above p_max were handled explicitly; the rest satisfy the frozen tail bound,
  // and sum_{p > P} 2/p^2 < 2/P.
  Rational tail(kTailConstant, p_max);
  tail.canonicalize();
  out.tail_factor = 1 - tail;
  if (out.tail_factor < 0) out.tail_factor = 0;
  out.bound = out.special_factor * out.explicit_factor * out.tail_factor;
  return out;
}

std::string to_string(Solubility s) {
  switch (s) {
    case Solubility::Soluble: return "soluble";
    case Solubility::InsolubleCertified: return "insoluble-certified";
    default: return "unknown";
  }
}

SolubilityResult solubility_quadric_Zp(const IntPolynomial& f, std::int64_t p, unsigned v_max, std::uint64_t budget) {
  require_prime(p);
  SolubilityResult out;
  const std::size_t m = f.num_vars();
  if (p > 2 && f.total_degree() <= 2) {
    auto d = ff::diagonalize_mod_p(forms::quadratic_data(f).Q, p);
    if (d.rank >= 5) {
      out.verdict = Solubility::Soluble;
      out.reason = "rank >= 5 mod p: a nonsingular zero mod p exists";
      return out;
    }
  }
  std::vector<std::size_t> vars(m);
  std::iota(vars.begin(), vars.end(), 0);
  if (auto w = ff::find_padic_nonsingular(f, vars, p, v_max, budget)) {
    out.verdict = Solubility::Soluble;
    out.witness = w;
    out.reason = "nonsingular zero mod p^" + std::to_string(2 * w->v - 1);
    return out;
  }
  for (unsigned k = 1; k <= 2 * v_max + 1; ++k) {
    if (ff::count_mod_prime_power(f, p, k, budget) == 0) {
      out.verdict = Solubility::InsolubleCertified;
      out.empty_level = k;
      out.reason = "no zeros mod p^" + std::to_string(k);
      return out;
    }
  }
  out.reason = "zeros mod p^k exist but no nonsingular witness up to the search level";
  return out;
}

}  // namespace cubicfib::local
