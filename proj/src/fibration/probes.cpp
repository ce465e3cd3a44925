#include <algorithm>
#include <cmath>
#include <random>

#include "cubicfib/fibration/fibration.hpp"

namespace cubicfib::fibration {

namespace {

using forms::CompiledPolynomial;

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % p);
}

std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t p) {
  std::int64_t r = 1;
  for (; e > 0; e >>= 1, a = mulmod(a, a, p))
    if (e & 1) r = mulmod(r, a, p);
  return r;
}

// Rank over F_p; entries in [0, p).
std::size_t rank_mod(std::vector<std::vector<std::int64_t>> m, std::int64_t p) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    std::int64_t inv = powmod(m[rank][c], p - 2, p);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][c] == 0) continue;
      std::int64_t f = mulmod(m[r][c], inv, p);
      for (std::size_t k = c; k < cols; ++k) m[r][k] = (m[r][k] - mulmod(f, m[rank][k], p) + p) % p;
    }
    ++rank;
  }
  return rank;
}

struct CompiledMatrix {
  std::vector<std::vector<CompiledPolynomial>> entries;
  explicit CompiledMatrix(const PolyMatrix& m) {
    for (const auto& row : m) {
      entries.emplace_back();
      for (const auto& e : row) entries.back().emplace_back(e);
    }
  }
  std::vector<std::vector<std::int64_t>> eval_mod(const std::int64_t* y, std::int64_t p) const {
    std::vector<std::vector<std::int64_t>> out(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
      for (const auto& e : entries[i]) out[i].push_back(e.eval_mod(y, p));
    return out;
  }
};

// Calls visit on every projective point of P^{k-1}(F_p) (first nonzero coordinate 1), or on `budget`
// uniformly random ones. Returns the scaling factor from hits to the estimated count.
template <class Visit>
double projective_points(std::size_t k, std::int64_t p, std::uint64_t budget, std::mt19937_64& rng, bool& sampled,
                         Visit visit) {
  double total = (std::pow(double(p), double(k)) - 1) / double(p - 1);
  std::vector<std::int64_t> y(k, 0);
  if (total <= double(budget)) {
    sampled = false;
    for (std::size_t lead = 0; lead < k; ++lead) {
      std::fill(y.begin(), y.end(), 0);
      y[lead] = 1;
      while (true) {
        visit(y.data());
        std::size_t i = lead + 1;
        while (i < k && y[i] == p - 1) y[i++] = 0;
        if (i >= k) break;
        ++y[i];
      }
    }
    return 1.0;
  }
  sampled = true;
  std::uniform_int_distribution<std::int64_t> dist(0, p - 1);
  for (std::uint64_t s = 0; s < budget; ++s) {
    do
      for (auto& v : y) v = dist(rng);
    while (std::all_of(y.begin(), y.end(), [](std::int64_t v) { return v == 0; }));
    visit(y.data());
  }
  return total / double(budget);
}

// Least-squares slope of log(count) against log(p) through the nonzero counts.
double fit_dimension(const std::vector<std::int64_t>& primes, const std::vector<double>& counts) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < primes.size(); ++i)
    if (counts[i] > 0) {
      xs.push_back(std::log(double(primes[i])));
      ys.push_back(std::log(counts[i]));
    }
  if (xs.empty()) return -1;
  if (xs.size() == 1) return ys[0] / xs[0];
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(xs.size());
  my /= double(xs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : my / mx;
}

}  // namespace

CodimProbe codim_probe(const PolyMatrix& m, std::size_t num_params, std::size_t max_rank,
                       const std::vector<std::int64_t>& primes, std::uint64_t seed, std::uint64_t budget) {
  CodimProbe out;
  out.primes = primes;
  out.seed = seed;
  CompiledMatrix cm(m);
  std::mt19937_64 rng(seed);
  for (auto p : primes) {
    std::uint64_t hits = 0;
    bool sampled = false;
    double factor = projective_points(num_params, p, budget, rng, sampled, [&](const std::int64_t* y) {
      if (rank_mod(cm.eval_mod(y, p), p) <= max_rank) ++hits;
    });
    out.counts.push_back(double(hits) * factor);
    out.sampled.push_back(sampled);
  }
  if (primes.empty()) {
    out.codim_estimate = -1;
    return out;
  }
  double dim = fit_dimension(primes, out.counts);
  out.fitted_projective_dim = dim;
  out.codim_estimate = dim < 0 ? int(num_params) : int(num_params) - 1 - int(std::lround(dim));
  return out;
}

SingularProbe singular_locus_dim_probe(const IntPolynomial& f, const std::vector<std::int64_t>& primes,
                                       std::uint64_t seed, std::uint64_t budget) {
  if (f.is_zero()) throw std::invalid_argument("singular locus of the zero polynomial");
  SingularProbe out;
  out.primes = primes;
  out.seed = seed;
  const std::size_t m = f.num_vars();
  std::vector<CompiledPolynomial> grad;
  for (const auto& g : f.gradient()) grad.emplace_back(g);
  auto singular = [&](const std::int64_t* x, std::int64_t p) {
    for (const auto& g : grad)
      if (g.eval_mod(x, p) != 0) return false;
    return true;
  };
  std::mt19937_64 rng(seed);
  for (auto p : primes) {
    bool sampled = false;
    double count = 0;
    if (f.is_homogeneous()) {
      // The gradient zeros form a cone: affine count = 1 + (p - 1) * projective count.
      std::uint64_t hits = 0;
      double factor = projective_points(m, p, budget, rng, sampled, [&](const std::int64_t* x) {
        if (singular(x, p)) ++hits;
      });
      count = 1 + double(p - 1) * double(hits) * factor;
    } else {
      double total = std::pow(double(p), double(m));
      std::vector<std::int64_t> x(m, 0);
      std::uint64_t hits = 0;
      if (total <= double(budget)) {
        while (true) {
          if (singular(x.data(), p)) ++hits;
          std::size_t i = 0;
          while (i < m && x[i] == p - 1) x[i++] = 0;
          if (i == m) break;
          ++x[i];
        }
        count = double(hits);
      } else {
        sampled = true;
        std::uniform_int_distribution<std::int64_t> dist(0, p - 1);
        for (std::uint64_t s = 0; s < budget; ++s) {
          for (auto& v : x) v = dist(rng);
          if (singular(x.data(), p)) ++hits;
        }
        count = double(hits) * total / double(budget);
      }
    }
    out.counts.push_back(count);
    out.sampled.push_back(sampled);
  }
  out.fitted_dim = fit_dimension(primes, out.counts);
  out.estimate = out.fitted_dim < 0 ? -1 : int(std::lround(out.fitted_dim));
  return out;
}

LowRankCount low_rank_specialization_count(const PolyMatrix& m, std::size_t num_vars, long R,
                                           std::uint64_t budget) {
  LowRankCount out;
  double total = std::pow(double(2 * R + 1), double(num_vars));
  if (forms::symbolic_rank(m).rank <= 2) {
    out.degenerate = true;
    mpz_ui_pow_ui(out.count.get_mpz_t(), static_cast<unsigned long>(2 * R + 1), num_vars);
    return out;
  }
  if (total > double(budget)) throw forms::BudgetExceeded("low-rank enumeration box exceeds the budget");
  constexpr std::int64_t kPrime = 2305843009213693951;  // 2^61 - 1
  CompiledMatrix cm(m);
  std::vector<std::int64_t> x(num_vars, -R), xr(num_vars);
  std::vector<Integer> xi(num_vars);
  out.count = 0;
  while (true) {
    for (std::size_t i = 0; i < num_vars; ++i) xr[i] = ((x[i] % kPrime) + kPrime) % kPrime;
    // rank mod p never exceeds the rank over Q, so rank > 2 mod p settles the point.
    if (rank_mod(cm.eval_mod(xr.data(), kPrime), kPrime) <= 2) {
      for (std::size_t i = 0; i < num_vars; ++i) xi[i] = static_cast<long>(x[i]);
      if (forms::integer_rank(forms::evaluate_matrix(m, xi)) <= 2) ++out.count;
    }
    std::size_t i = 0;
    while (i < num_vars && x[i] == R) x[i++] = -R;
    if (i == num_vars) break;
    ++x[i];
  }
  return out;
}

}  // namespace cubicfib::fibration
