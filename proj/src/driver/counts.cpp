#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cubicfib/driver/driver.hpp"
#include "cubicfib/ff/arith.hpp"
#include "cubicfib/lattice/lattice.hpp"

namespace cubicfib::driver {

namespace {

std::vector<long> sorted_unique(std::vector<long> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (!v.empty() && v.front() < 0) throw std::invalid_argument("heights must be nonnegative");
  return v;
}

Integer isqrt_floor(const Integer& a) {
  if (a < 0) return -1;
  Integer s;
  mpz_sqrt(s.get_mpz_t(), a.get_mpz_t());
  return s;
}

// floor(sqrt(r)) for a nonnegative rational.
Integer floor_sqrt(const Rational& r) {
  Integer q = r.get_num() / r.get_den();
  return isqrt_floor(q);
}

}  // namespace

bool CountSeries::monotone() const {
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].B >= points[i - 1].B && points[i].count < points[i - 1].count) return false;
  return true;
}

CountSeries brute_force_N(const IntPolynomial& C, const std::vector<long>& B_list, std::uint64_t budget) {
  auto Bs = sorted_unique(B_list);
  CountSeries out;
  out.method = "brute-force";
  if (Bs.empty()) return out;
  const std::size_t n = C.num_vars();
  const long Bmax = Bs.back();
  if (std::pow(double(2 * Bmax + 1), double(n)) > double(budget))
    throw forms::BudgetExceeded("brute force over " + std::to_string(2 * Bmax + 1) + "^" + std::to_string(n) +
                                " points");
  forms::CompiledPolynomial cf(C);
  const bool exact = cf.small_coefficients();
  std::vector<Integer> by_height(Bmax + 1, 0);
  std::vector<std::int64_t> x(n, -Bmax);
  while (true) {
    std::int64_t g = 0, h = 0;
    for (auto v : x) {
      g = std::gcd(g, v);
      h = std::max<std::int64_t>(h, v < 0 ? -v : v);
    }
    if (g == 1 && (exact ? cf.eval_exact(x.data()) == 0 : cf.eval_big(x.data()) == 0)) by_height[h] += 1;
    std::size_t i = 0;
    while (i < n && x[i] == Bmax) x[i++] = -Bmax;
    if (i == n) break;
    ++x[i];
  }
  Integer running = 0;
  std::size_t next = 0;
  for (long h = 0; h <= Bmax; ++h) {
    running += by_height[h];
    while (next < Bs.size() && Bs[next] == h) out.points.push_back({Bs[next++], running});
  }
  return out;
}

long floor_power(long B, const Rational& e) {
  if (B < 0 || e < 0) throw std::domain_error("floor_power needs B >= 0 and e >= 0");
  if (B <= 1) return B;
  const unsigned long p = e.get_num().get_ui(), q = e.get_den().get_ui();
  Integer target = ff::ipow(Integer(B), p);
  long Y = static_cast<long>(std::floor(std::pow(double(B), e.get_d())));
  while (Y > 0 && ff::ipow(Integer(Y), q) > target) --Y;
  while (ff::ipow(Integer(Y + 1), q) <= target) ++Y;
  return Y;
}

FibrationCount fibration_count(const IntPolynomial& C, const VariableSplit& split, const std::vector<long>& B_list,
                               const FibrationCountConfig& config) {
  split.validate_for(C);
  const std::size_t n = C.num_vars(), m = split.x_indices.size(), h = split.y_indices.size();
  auto Bs = sorted_unique(B_list);
  FibrationCount out;
  out.sampled = split.mode == FibrationMode::Pi;
  out.series.method = out.sampled ? "fibration-sampled" : "fibration-exact";

  sieve::AdmissibleSetSpec spec;
  spec.box = config.box.intervals.empty() ? sieve::BoxSpec::cube(h, -1, 1) : config.box;
  if (spec.box.intervals.size() != h) throw forms::DimensionError("box dimension differs from the parameter count");
  spec.conditions = sieve::build_conditions(C, split, config.v_max, config.budget);
  if (spec.conditions.failed) out.conditions_failure = spec.conditions.failure;
  auto parts = fibration::decompose(C, split);

  auto full_point = [&](const std::vector<Integer>& x, const std::vector<Integer>& y) {
    std::vector<Integer> pt(n);
    for (std::size_t j = 0; j < m; ++j) pt[split.x_indices[j]] = x[j];
    for (std::size_t l = 0; l < h; ++l) pt[split.y_indices[l]] = y[l];
    return pt;
  };

  for (long B : Bs) {
    const long Y = config.fixed_Y ? *config.fixed_Y : floor_power(B, config.y_exponent);
    out.Y.push_back(Y);
    std::vector<std::vector<Integer>> ys;
    if (!spec.conditions.failed)
      sieve::enumerate_admissible(spec, Y, [&](const std::vector<Integer>& y) { ys.push_back(y); }, config.budget);
    if (out.sampled && ys.size() > config.max_fibres) {
      std::mt19937_64 rng(config.seed);
      std::shuffle(ys.begin(), ys.end(), rng);
      ys.resize(config.max_fibres);
      std::sort(ys.begin(), ys.end());
    }
    out.fibres.push_back(ys.size());
    const Rational B_sq = Rational(B) * B;
    Integer total = 0;
    std::size_t samples = 0;
    for (const auto& y : ys) {
      Integer g = 0;
      for (const auto& v : y) g = gcd(g, v);
      Integer count = 0;
      if (!out.sampled) {
        lattice::IntVector a(m);
        for (std::size_t j = 0; j < m; ++j) a[j] = parts.q[j].evaluate(y);
        Integer b = parts.R.evaluate(y), c = lattice::content(a);
        if (c == 0 || b % c != 0) continue;
        for (auto& v : a) v /= c;
        count = lattice::hyperplane_count_coprime(a, b / c, B_sq, g, config.budget);
      } else {
        auto f = sieve::fibre_polynomial(C, split, y);
        if (std::pow(double(2 * B + 1), double(m)) > double(config.budget))
          throw forms::BudgetExceeded("quadric fibre search exceeds the budget");
        forms::CompiledPolynomial cf(f);
        std::vector<std::int64_t> x(m, -B);
        const std::int64_t limit = B * B - 1;
        const std::int64_t gi = g.fits_slong_p() ? g.get_si() : 0;
        while (true) {
          std::int64_t norm = 0, gx = gi;
          for (auto v : x) {
            norm += v * v;
            gx = std::gcd(gx, v);
          }
          if (norm <= limit && gx == 1 && cf.eval_big(x.data()) == 0) count += 1;
          std::size_t i = 0;
          while (i < m && x[i] == B) x[i++] = -B;
          if (i == m) break;
          ++x[i];
        }
      }
      total += count;
      if (count > 0 && samples < config.samples_per_B) {
        auto fs = sieve::fibre_solubility(y, C, split, 2);
        if (!fs.point.empty()) {
          PointSample s;
          s.B = B;
          s.point = full_point(fs.point, y);
          s.verified = C.evaluate(s.point) == 0;
          out.samples.push_back(std::move(s));
          ++samples;
        }
      }
    }
    out.series.points.push_back({B, total});
  }
  return out;
}

CoprimeRepresentation representation_count_coprime(const IntPolynomial& F, const std::vector<Integer>& xi,
                                                   const Integer& N, const Rational& window, std::uint64_t budget) {
  const std::size_t r = F.num_vars();
  if (xi.size() != r) throw forms::DimensionError("shift has the wrong length");
  if (!F.is_homogeneous() || F.total_degree() != 2) throw forms::DimensionError("expected a quadratic form");
  auto qd = forms::quadratic_data(F);
  auto inertia = forms::rank_signature_over_Q(qd.Q);
  if (inertia.positive != r) throw std::domain_error("representation counts need a positive definite form");
  CoprimeRepresentation out;
  out.delta = forms::integer_determinant(qd.hessian());
  const Integer two_delta = 2 * out.delta;
  Integer fxi = F.evaluate(xi);
  Integer diff = fxi - N;
  out.precondition_holds = diff % two_delta == 0;

  std::vector<Integer> divisors;
  for (const auto& d : ff::divisors(two_delta))
    if (ff::mobius(d) != 0) divisors.push_back(d);
  std::vector<Integer> Md(divisors.size(), 0);
  out.count = 0;

  if (N >= 0) {
    // z = x + xi ranges over F(z) = N: z_i^2 <= N (Q^{-1})_{ii}, and the window bounds x_i^2 <= w^2 N.
    auto inv = *qd.Q.inverse();
    const Rational w2N = window * window * Rational(N);
    std::vector<Integer> lo(r), hi(r);
    double size = 1;
    for (std::size_t i = 0; i < r; ++i) {
      Integer zb = floor_sqrt(Rational(N) * inv(i, i)), xb = floor_sqrt(w2N);
      lo[i] = std::max(Integer(-zb), Integer(xi[i] - xb));
      hi[i] = std::min(zb, Integer(xi[i] + xb));
      if (i + 1 < r) size *= std::max(0.0, Integer(hi[i] - lo[i] + 1).get_d());
    }
    if (size > double(budget)) throw forms::BudgetExceeded("representation enumeration exceeds the budget");
    bool empty = false;
    for (std::size_t i = 0; i < r; ++i) empty = empty || hi[i] < lo[i];
    if (!empty) {
      // F(z) = A t^2 + (sum_j c_j z_j) t + F(z', 0) in the last coordinate t.
      Exponent et(r, 0);
      et[r - 1] = 2;
      const Integer A = F.coefficient(et);
      std::vector<Integer> cross(r, 0);
      for (std::size_t j = 0; j + 1 < r; ++j) {
        Exponent e(r, 0);
        e[j] = 1;
        e[r - 1] = 1;
        cross[j] = F.coefficient(e);
      }
      IntPolynomial rest = F.specialize(std::vector<std::size_t>{r - 1}, std::vector<Integer>{0});
      // Machine arithmetic: |z_i| <= 2^21 and small coefficients keep every term below 2^100.
      forms::CompiledPolynomial crest(rest);
      bool small = crest.small_coefficients() && N < (Integer(1) << 40) && abs(A) < (1 << 20);
      for (std::size_t j = 0; j < r; ++j) small = small && abs(cross[j]) < (1 << 20);
      if (!small) throw std::domain_error("representation counts are limited to N < 2^40 and small coefficients");
      const __int128 A128 = A.get_si(), N128 = N.get_si();
      std::vector<std::int64_t> z(r, 0), cr(r, 0);
      for (std::size_t j = 0; j + 1 < r; ++j) cr[j] = cross[j].get_si();
      for (std::size_t i = 0; i + 1 < r; ++i) z[i] = lo[i].get_si();
      const std::int64_t tlo = lo[r - 1].get_si(), thi = hi[r - 1].get_si();
      auto visit = [&]() {
        Integer g = two_delta;
        bool in_window = true;
        std::vector<Integer> x(r);
        for (std::size_t i = 0; i < r; ++i) {
          x[i] = Integer(static_cast<long>(z[i])) - xi[i];
          g = gcd(g, x[i]);
          in_window = in_window && Rational(x[i] * x[i]) <= w2N;
        }
        if (!in_window) return;
        if (g == 1) out.count += 1;
        for (std::size_t k = 0; k < divisors.size(); ++k) {
          bool all = true;
          for (const auto& v : x) all = all && v % divisors[k] == 0;
          if (all) Md[k] += 1;
        }
      };
      while (true) {
        __int128 bcoef = 0;
        for (std::size_t j = 0; j + 1 < r; ++j) bcoef += static_cast<__int128>(cr[j]) * z[j];
        z[r - 1] = 0;
        __int128 ccoef = crest.eval_exact(z.data()) - N128;
        __int128 disc = bcoef * bcoef - 4 * A128 * ccoef;
        if (disc >= 0) {
          auto s = static_cast<__int128>(std::sqrt(static_cast<long double>(disc)));
          while (s * s > disc) --s;
          while ((s + 1) * (s + 1) <= disc) ++s;
          if (s * s == disc) {
            for (int sign : {-1, 1}) {
              if (sign == 1 && s == 0) break;
              __int128 num = -bcoef + sign * s;
              if (num % (2 * A128) != 0) continue;
              __int128 t = num / (2 * A128);
              if (t < tlo || t > thi) continue;
              z[r - 1] = static_cast<std::int64_t>(t);
              visit();
            }
          }
        }
        std::size_t i = 0;
        while (i + 1 < r && z[i] == hi[i]) {
          z[i] = lo[i].get_si();
          ++i;
        }
        if (i + 1 >= r) break;
        ++z[i];
      }
    }
  }
  out.mobius_sum = 0;
  for (std::size_t k = 0; k < divisors.size(); ++k) {
    out.by_divisor.emplace_back(divisors[k], Md[k]);
    out.mobius_sum += ff::mobius(divisors[k]) * Md[k];
  }
  return out;
}

ExponentFit fit_exponent(const CountSeries& series) {
  std::vector<double> xs, ys;
  for (const auto& p : series.points)
    if (p.count > 0 && p.B > 0) {
      xs.push_back(std::log(double(p.B)));
      ys.push_back(std::log(p.count.get_d()));
    }
  if (xs.size() < 4) throw InsufficientData("exponent fit needs at least 4 positive counts, got " +
                                            std::to_string(xs.size()));
  const double k = double(xs.size());
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k, my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw InsufficientData("exponent fit needs at least two distinct heights");
  ExponentFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = xs.size();
  for (std::size_t i = 0; i < xs.size(); ++i) f.residuals.push_back(ys[i] - (f.intercept + f.slope * xs[i]));
  return f;
}

FitVerdict compare(const ExponentFit& fit, double predicted, double slack) {
  return {predicted, slack, fit.slope >= predicted - slack};
}

}  // namespace cubicfib::driver
