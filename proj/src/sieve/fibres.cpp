#include <algorithm>
#include <cmath>

#include "cubicfib/ff/arith.hpp"
#include "cubicfib/lattice/lattice.hpp"
#include "cubicfib/local/density.hpp"
#include "cubicfib/sieve/sieve.hpp"

namespace cubicfib::sieve {

namespace {

// gcd of all order-k minors of an integer matrix.
Integer minor_gcd(const forms::IntMatrix& m, std::size_t k) {
  const std::size_t n = m.size();
  Integer g = 0;
  std::vector<std::size_t> rows(k), cols(k);
  auto first = [&](std::vector<std::size_t>& s) {
    for (std::size_t i = 0; i < k; ++i) s[i] = i;
  };
  auto next = [&](std::vector<std::size_t>& s) {
    std::size_t i = k;
    while (i > 0 && s[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++s[i - 1];
    for (std::size_t j = i; j < k; ++j) s[j] = s[j - 1] + 1;
    return true;
  };
  first(rows);
  do {
    first(cols);
    do {
      forms::IntMatrix sub(k, std::vector<Integer>(k));
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) sub[a][b] = m[rows[a]][cols[b]];
      g = gcd(g, forms::integer_determinant(sub));
      if (g == 1) return g;
    } while (next(cols));
  } while (next(rows));
  return g;
}

std::optional<std::vector<Integer>> bounded_search(const IntPolynomial& f, long bound, std::uint64_t budget) {
  const std::size_t m = f.num_vars();
  while (bound > 0 && std::pow(double(2 * bound + 1), double(m)) > double(budget)) --bound;
  forms::CompiledPolynomial cf(f);
  std::vector<std::int64_t> x(m, -bound);
  bool exact = cf.small_coefficients();
  while (true) {
    bool zero = exact ? cf.eval_exact(x.data()) == 0 : cf.eval_big(x.data()) == 0;
    if (zero) return std::vector<Integer>(x.begin(), x.end());
    std::size_t i = 0;
    while (i < m && x[i] == bound) x[i++] = -bound;
    if (i == m) return std::nullopt;
    ++x[i];
  }
}

}  // namespace

std::string to_string(FibreVerdict v) {
  switch (v) {
    case FibreVerdict::SolubleWithPoint: return "soluble-with-point";
    case FibreVerdict::SolublePrincipleInvoked: return "soluble-principle-invoked";
    case FibreVerdict::Insoluble: return "insoluble";
    case FibreVerdict::Unknown: return "unknown";
  }
  return "?";
}

IntPolynomial fibre_polynomial(const IntPolynomial& cubic, const VariableSplit& split, std::span<const Integer> y) {
  const std::size_t n = cubic.num_vars(), m = split.x_indices.size();
  split.validate(n);
  if (y.size() != split.y_indices.size()) throw forms::DimensionError("parameter vector has the wrong length");
  std::vector<IntPolynomial> images(n);
  for (std::size_t j = 0; j < m; ++j) images[split.x_indices[j]] = IntPolynomial::variable(m, j);
  for (std::size_t l = 0; l < y.size(); ++l) images[split.y_indices[l]] = IntPolynomial::constant(m, y[l]);
  return cubic.compose(images);
}

FibreSolubility fibre_solubility(std::span<const Integer> y, const IntPolynomial& cubic, const VariableSplit& split,
                                 long search_bound, std::uint64_t budget) {
  split.validate_for(cubic);
  const std::size_t m = split.x_indices.size();
  IntPolynomial f = fibre_polynomial(cubic, split, y);
  FibreSolubility out;

  if (split.mode == FibrationMode::PiPrime) {
    lattice::IntVector a(m);
    for (std::size_t j = 0; j < m; ++j) {
      forms::Exponent e(m, 0);
      e[j] = 1;
      a[j] = f.coefficient(e);
    }
    Integer b = f.coefficient(forms::Exponent(m, 0));
    Integer g = lattice::content(a);
    if (g == 0) {
      if (b == 0) {
        out.verdict = FibreVerdict::SolubleWithPoint;
        out.point.assign(m, 0);
      } else {
        out.verdict = FibreVerdict::Insoluble;
        out.reason = "all fibre coefficients vanish and the constant term is nonzero";
      }
      return out;
    }
    if (b % g != 0) {
      out.verdict = FibreVerdict::Insoluble;
      out.reason = "gcd of the coefficients " + g.get_str() + " does not divide " + b.get_str();
      return out;
    }
    // a U = (g, 0, ...), so x = -(b/g) U e_1 solves a.x + b = 0.
    Integer gg;
    auto U = lattice::unimodular_completion(a, &gg);
    out.point.resize(m);
    for (std::size_t j = 0; j < m; ++j) out.point[j] = -(b / g) * U[j][0];
    if (f.evaluate(out.point) != 0) throw std::logic_error("extended-gcd solution does not satisfy the fibre");
    out.verdict = FibreVerdict::SolubleWithPoint;
    return out;
  }

  if (auto x = bounded_search(f, search_bound, budget)) {
    out.verdict = FibreVerdict::SolubleWithPoint;
    out.point = *x;
    return out;
  }
  if (f.total_degree() < 2) {
    out.reason = "fibre is not a quadric and no point was found";
    return out;
  }
  auto qd = forms::quadratic_data(f);
  auto inertia = forms::rank_signature_over_Q(qd.Q);
  if (inertia.rank < 5) {
    out.reason = "quadratic part has rank " + std::to_string(inertia.rank) + " < 5 and no point was found";
    return out;
  }
  if (inertia.positive == 0 || inertia.negative == 0) {
    if (inertia.rank == m) {
      // Definite: the extremum -N + B^T Q^{-1} B / 4 decides real solubility.
      auto inv = qd.Q.inverse();
      std::vector<Rational> B(qd.B.begin(), qd.B.end());
      auto w = *inv * B;
      Rational s = 0;
      for (std::size_t i = 0; i < m; ++i) s += B[i] * w[i];
      Rational extremum = Rational(qd.N) - s / 4;
      bool positive = inertia.positive > 0;
      if ((positive && extremum > 0) || (!positive && extremum < 0)) {
        out.verdict = FibreVerdict::Insoluble;
        out.reason = "definite fibre without real points";
        return out;
      }
    }
    out.reason = "semidefinite fibre; the integral Hasse principle is not invoked";
    return out;
  }
  // Odd p with rank >= 5 mod p has a nonsingular zero mod p once p >= 5; the rest are checked over Z_p.
  std::vector<std::int64_t> primes = {2, 3};
  Integer d5 = minor_gcd(qd.hessian(), 5);
  for (const auto& [p, e] : ff::factorize(d5)) {
    (void)e;
    if (p > 3) primes.push_back(p.get_si());
  }
  for (auto p : primes) {
    local::SolubilityResult r;
    try {
      r = local::solubility_quadric_Zp(f, p, 3, budget * 50);
    } catch (const forms::BudgetExceeded&) {
      out.reason = "Z_" + std::to_string(p) + " check exceeded the budget";
      return out;
    }
    if (r.verdict == local::Solubility::InsolubleCertified) {
      out.verdict = FibreVerdict::Insoluble;
      out.reason = "no Z_" + std::to_string(p) + " point: " + r.reason;
      return out;
    }
    if (r.verdict == local::Solubility::Unknown) {
      out.reason = "Z_" + std::to_string(p) + " solubility undecided: " + r.reason;
      return out;
    }
    out.local_primes.push_back(p);
  }
  out.verdict = FibreVerdict::SolublePrincipleInvoked;
  out.reason = "indefinite of rank " + std::to_string(inertia.rank) + ", locally soluble at the bad primes";
  return out;
}

}  // namespace cubicfib::sieve
