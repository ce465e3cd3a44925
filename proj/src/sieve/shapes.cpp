#include <algorithm>
#include <cmath>
#include <random>

#include "cubicfib/ff/arith.hpp"
#include "cubicfib/lattice/lattice.hpp"
#include "cubicfib/sieve/sieve.hpp"

namespace cubicfib::sieve {

namespace {

// floor(sqrt(r) * 2^kBits) / 2^kBits and the matching upper bound.
constexpr unsigned kBits = 24;

Rational sqrt_bound(const Rational& r, bool upper) {
  Integer scaled = r.get_num() * r.get_den() << (2 * kBits), s;
  mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
  if (upper && s * s != scaled) s += 1;
  Rational out(s, r.get_den() << kBits);
  out.canonicalize();
  return out;
}

std::optional<std::vector<Integer>> solve_two_term(const Integer& c0, const Integer& c1, const Integer& rhs) {
  // c0 u + c1 v = rhs with gcd(c0, c1) | rhs.
  lattice::IntVector a{c0, c1};
  Integer g;
  auto U = lattice::unimodular_completion(a, &g);
  if (g == 0 || rhs % g != 0) return std::nullopt;
  Integer t = rhs / g;
  return std::vector<Integer>{t * U[0][0], t * U[1][0]};
}

}  // namespace

std::optional<ReducibleShape> detect_reducible_shape(const IntPolynomial& cubic, const VariableSplit& split) {
  if (split.mode != FibrationMode::PiPrime) return std::nullopt;
  auto parts = fibration::decompose(cubic, split);
  const std::size_t d = split.x_indices.size(), h = split.y_indices.size();
  if (d < 2) return std::nullopt;
  for (const auto& F : parts.F)
    if (!F.is_zero()) return std::nullopt;
  // Each Q_j must be a single monomial alpha_j y_a y_b; the common factor y_k lies in all of them.
  std::vector<std::vector<std::size_t>> vars(d);
  std::vector<Integer> alpha(d);
  for (std::size_t j = 0; j < d; ++j) {
    if (parts.q[j].num_terms() != 1) return std::nullopt;
    const auto& [e, c] = *parts.q[j].terms().begin();
    alpha[j] = c;
    for (std::size_t l = 0; l < h; ++l)
      for (unsigned t = 0; t < e[l]; ++t) vars[j].push_back(l);
  }
  for (std::size_t k = 0; k < h; ++k) {
    ReducibleShape s;
    s.k = k;
    bool ok = true;
    for (std::size_t j = 0; j < d && ok; ++j) {
      auto it = std::find(vars[j].begin(), vars[j].end(), k);
      if (it == vars[j].end()) {
        ok = false;
        break;
      }
      s.pair.push_back(vars[j][it == vars[j].begin() ? 1 : 0]);
    }
    if (!ok) continue;
    auto sorted = s.pair;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    s.alpha = alpha;
    s.R = parts.R;
    s.g = gcd(alpha[0], alpha[1]);
    s.beta0 = alpha[0] / s.g;
    s.beta1 = alpha[1] / s.g;
    return s;
  }
  return std::nullopt;
}

ReducibleCaseSet reducible_case_set(const IntPolynomial& cubic, const VariableSplit& split, long Y,
                                    const Rational& delta, std::uint64_t budget) {
  auto shape = detect_reducible_shape(cubic, split);
  if (!shape) throw forms::DimensionError("cubic is not of the shape y_k sum alpha_i x_i y_i + R(y)");
  ReducibleCaseSet out;
  out.shape = *shape;
  out.tuple_count = 0;
  const std::size_t d = split.x_indices.size(), h = split.y_indices.size();
  const std::size_t k = shape->k;
  std::vector<long> primes;
  Rational lo = delta * Y, hi = 2 * delta * Y;
  for (auto p : ff::primes_up_to(static_cast<std::int64_t>(std::floor(hi.get_d())) + 1))
    if (lo <= Rational(p) && Rational(p) <= hi && p <= Y) primes.push_back(p);
  if (primes.empty()) return out;
  double size = std::pow(double(2 * Y + 1), double(h - 1)) * double(primes.size());
  if (size > double(budget)) throw forms::BudgetExceeded("reducible-case enumeration exceeds the budget");

  forms::CompiledPolynomial R(shape->R);
  Integer free_x = ff::ipow(Integer(2 * Y + 1), static_cast<unsigned long>(d - 2));
  std::vector<std::int64_t> y(h, -Y);
  std::vector<std::size_t> others;
  for (std::size_t l = 0; l < h; ++l)
    if (l != k) others.push_back(l);
  for (long p : primes) {
    y[k] = p;
    for (auto l : others) y[l] = -Y;
    while (true) {
      // Modulo y_k the x_j y_k terms drop out of R_1, leaving R(y).
      Integer a0 = shape->beta0 * y[shape->pair[0]], a1 = shape->beta1 * y[shape->pair[1]];
      if (gcd(a0, a1) == 1 && R.eval_big(y.data()) % p == 0) {
        out.ys.emplace_back(y.begin(), y.end());
        out.tuple_count += free_x;
      }
      std::size_t i = 0;
      while (i < others.size() && y[others[i]] == Y) y[others[i++]] = -Y;
      if (i == others.size()) break;
      ++y[others[i]];
    }
  }

  // Explicit solutions at x_j in {-Y, 0, Y} for j >= 2, scaled by g as in the shape's substitution.
  const std::size_t n = cubic.num_vars();
  for (const auto& yv : out.ys) {
    for (long xv : {-Y, 0L, Y}) {
      Integer rest = 0;
      for (std::size_t j = 2; j < d; ++j) rest += shape->alpha[j] * xv * yv[shape->pair[j]];
      Integer R1 = yv[k] * rest + shape->R.evaluate(yv);
      if (R1 % yv[k] != 0) throw std::logic_error("congruence condition failed on an accepted tuple");
      auto sol = solve_two_term(shape->beta0 * yv[shape->pair[0]], shape->beta1 * yv[shape->pair[1]], -R1 / yv[k]);
      if (!sol) throw std::logic_error("coprime linear equation without a solution");
      std::vector<Integer> pt(n);
      pt[split.x_indices[0]] = (*sol)[0];
      pt[split.x_indices[1]] = (*sol)[1];
      for (std::size_t j = 2; j < d; ++j) pt[split.x_indices[j]] = shape->g * xv;
      for (std::size_t l = 0; l < h; ++l) pt[split.y_indices[l]] = shape->g * yv[l];
      if (cubic.evaluate(pt) != 0) throw std::logic_error("reconstructed point does not lie on the cubic");
      ++out.verified;
    }
  }
  return out;
}

LargeQBox box_with_large_Q(const IntPolynomial& Q, long P, std::uint64_t sample_budget) {
  if (Q.is_zero()) throw std::domain_error("the quadratic form vanishes identically");
  if (Q.total_degree() != 2 || !Q.is_homogeneous()) throw forms::DimensionError("expected a quadratic form");
  const std::size_t k = Q.num_vars();
  auto qd = forms::quadratic_data(Q);
  auto dz = forms::diagonalize_congruence(qd.Q);
  LargeQBox out;
  out.diagonal = dz.diagonal;
  if (std::none_of(dz.diagonal.begin(), dz.diagonal.end(), [](const Rational& d) { return d > 0; })) {
    out.negated = true;
    for (auto& d : out.diagonal) d = -d;
  }
  std::vector<Interval> iv(k);
  Rational kk = static_cast<long>(k);
  out.c_lower = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const Rational& d = out.diagonal[i];
    if (d > 0) {
      // [1/sqrt(d), 2/sqrt(d)] shrunk to rational endpoints.
      iv[i] = {1 / sqrt_bound(d, false), 2 / sqrt_bound(d, true)};
      out.c_lower += d * iv[i].lo * iv[i].lo;
    } else if (d < 0) {
      Rational a = -d * kk;
      iv[i] = {1 / (4 * sqrt_bound(a, false)), 1 / (2 * sqrt_bound(a, true))};
      out.c_lower -= -d * iv[i].hi * iv[i].hi;
    } else {
      iv[i] = {-1, 1};
    }
  }
  bool identity = dz.transform == forms::RationalMatrix::identity(k);
  out.box = identity ? BoxSpec{iv, {}, {}} : BoxSpec::transformed(iv, dz.transform);

  // Integer points of P * Omega: every point when the hull is small enough, a fixed random subset otherwise.
  Rational PY = P;
  auto hull = out.box.integer_hull(PY);
  double total = 1;
  for (const auto& [lo, hi] : hull) total *= std::max(0.0, Integer(hi - lo + 1).get_d());
  std::mt19937_64 rng(P);
  std::vector<Integer> y(k);
  bool first = true;
  auto consider = [&] {
    if (!out.box.contains(y, PY)) return;
    Rational v = abs(Q.evaluate(y));
    v /= Rational(P) * P;
    v.canonicalize();
    if (first || v < out.c_measured) out.c_measured = v;
    first = false;
    ++out.samples;
  };
  if (total <= double(sample_budget)) {
    for (std::size_t i = 0; i < k; ++i) y[i] = hull[i].first;
    for (bool more = total > 0; more;) {
      consider();
      more = false;
      for (std::size_t i = k; i-- > 0;) {
        if (++y[i] <= hull[i].second) {
          more = true;
          break;
        }
        y[i] = hull[i].first;
      }
    }
  } else {
    for (std::uint64_t s = 0; s < sample_budget; ++s) {
      for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<long> dist(hull[i].first.get_si(), hull[i].second.get_si());
        y[i] = dist(rng);
      }
      consider();
    }
  }
  return out;
}

}  // namespace cubicfib::sieve
