#include <algorithm>
#include <cmath>
#include <limits>

#include "cubicfib/ff/arith.hpp"
#include "cubicfib/sieve/sieve.hpp"

namespace cubicfib::sieve {

namespace {

Integer floor_of(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer ceil_of(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

std::int64_t mod_of(const Integer& a, std::int64_t m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), Integer(static_cast<long>(m)).get_mpz_t());
  return r.get_si();
}

Integer pow_int(std::int64_t p, unsigned e) { return ff::ipow(Integer(static_cast<long>(p)), e); }

}  // namespace

bool BoxSpec::contains(std::span<const Integer> y, const Rational& Y) const {
  if (y.size() != intervals.size()) throw forms::DimensionError("point and box dimensions differ");
  std::vector<Rational> z(y.begin(), y.end());
  if (transform.rows() != 0) z = inverse * z;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (!(intervals[i].lo * Y <= z[i] && z[i] <= intervals[i].hi * Y)) return false;
  return true;
}

std::vector<std::pair<Integer, Integer>> BoxSpec::integer_hull(const Rational& Y) const {
  const std::size_t k = intervals.size();
  std::vector<std::pair<Integer, Integer>> out;
  for (std::size_t i = 0; i < k; ++i) {
    Rational lo = 0, hi = 0;
    for (std::size_t j = 0; j < k; ++j) {
      Rational t = transform.rows() ? transform(i, j) : Rational(i == j ? 1 : 0);
      if (t == 0) continue;
      Rational a = t * intervals[j].lo * Y, b = t * intervals[j].hi * Y;
      lo += std::min(a, b);
      hi += std::max(a, b);
    }
    out.emplace_back(ceil_of(lo), floor_of(hi));
  }
  return out;
}

BoxSpec BoxSpec::cube(std::size_t k, Rational lo, Rational hi) {
  BoxSpec b;
  b.intervals.assign(k, Interval{std::move(lo), std::move(hi)});
  return b;
}

BoxSpec BoxSpec::transformed(std::vector<Interval> intervals, const RationalMatrix& T) {
  auto inv = T.inverse();
  if (!inv) throw std::domain_error("box transform is singular");
  BoxSpec b;
  b.intervals = std::move(intervals);
  b.transform = T;
  b.inverse = *inv;
  return b;
}

bool LocalConditionSet::is_bad(std::int64_t p) const {
  return std::any_of(bad.begin(), bad.end(), [&](const BadPrimeCondition& c) { return c.p == p; });
}

std::int64_t LocalConditionSet::first_violation(std::span<const Integer> y) const {
  std::vector<std::int64_t> violated;
  for (const auto& c : bad) {
    for (std::size_t i = 0; i < y.size(); ++i)
      if (mod_of(y[i], c.modulus) != c.residue[i]) {
        violated.push_back(c.p);
        break;
      }
  }
  if (locus.empty()) return violated.empty() ? 0 : *std::min_element(violated.begin(), violated.end());
  Integer D = 0;
  for (const auto& f : locus) D = gcd(D, f.evaluate(y));
  if (D == 0) return -1;
  if (exact_good_primes) {
    for (const auto& [p, e] : ff::factorize(abs(D))) {
      (void)e;
      if (!p.fits_slong_p()) {
        violated.push_back(std::numeric_limits<std::int64_t>::max());
        continue;
      }
      if (!is_bad(p.get_si())) violated.push_back(p.get_si());
    }
  } else {
    for (auto p : checked_primes.empty() ? ff::primes_up_to(prime_cutoff) : checked_primes)
      if (!is_bad(p) && mod_of(D, p) == 0) {
        violated.push_back(p);
        break;
      }
  }
  return violated.empty() ? 0 : *std::min_element(violated.begin(), violated.end());
}

LocalConditionSet build_conditions(const IntPolynomial& cubic, const VariableSplit& split, unsigned v_max,
                                   std::uint64_t budget) {
  split.validate_for(cubic);
  LocalConditionSet out;
  out.mode = split.mode;
  std::vector<std::int64_t> bad_primes;
  if (split.mode == FibrationMode::PiPrime) {
    if (split.x_indices.size() < 2 || split.y_indices.size() < 2)
      throw std::domain_error("the linear-fibre conditions need at least two fibre and two parameter variables");
    auto parts = fibration::decompose(cubic, split);
    Integer g = 0;
    for (const auto& q : parts.q)
      if (!q.is_zero()) {
        out.locus.push_back(q);
        g = gcd(g, q.content());
      }
    if (out.locus.empty()) throw std::domain_error("every fibre coefficient Q_j vanishes");
    out.locus_matrix.push_back(out.locus);
    out.locus_max_rank = 0;
    for (const auto& [p, e] : ff::factorize(g)) {
      (void)e;
      bad_primes.push_back(p.get_si());
    }
  } else {
    auto fd = fibration::build_fibration(cubic, split);
    if (fd.rank < 3) throw std::domain_error("order-3 minors vanish identically (fibration rank below 3)");
    Integer content = 0;
    for (auto& m : fibration::nonzero_minors(fd.hessian, 3)) {
      content = gcd(content, m.value.content());
      out.locus.push_back(std::move(m.value));
    }
    out.locus_matrix = fd.hessian;
    out.locus_max_rank = 2;
    bad_primes.push_back(2);
    for (const auto& [p, e] : ff::factorize(content)) {
      (void)e;
      if (p != 2) bad_primes.push_back(p.get_si());
    }
  }
  for (auto p : bad_primes) out.M *= static_cast<long>(p);
  for (auto p : bad_primes) {
    std::optional<ff::PadicWitness> w;
    try {
      w = ff::find_padic_nonsingular(cubic, split.x_indices, p, v_max, budget);
    } catch (const forms::BudgetExceeded&) {
      out.failed = true;
      out.failure = "witness search at p = " + std::to_string(p) + " exceeded the budget";
      return out;
    }
    if (!w) {
      out.failed = true;
      out.failure = "no p-adic witness at p = " + std::to_string(p) + " up to level " + std::to_string(v_max);
      return out;
    }
    BadPrimeCondition c;
    c.p = p;
    c.v = w->v;
    c.modulus = w->modulus;
    c.witness = *w;
    for (auto i : split.y_indices) c.residue.push_back(w->residue[i]);
    forms::CompiledPolynomial cf(cubic);
    const std::int64_t pv = pow_int(p, w->v).get_si();
    bool grad_ok = false;
    for (auto i : split.x_indices)
      grad_ok = grad_ok || forms::CompiledPolynomial(cubic.partial(i)).eval_mod(w->residue.data(), pv) != 0;
    c.reverified = cf.eval_mod(w->residue.data(), w->modulus) == 0 && grad_ok;
    out.bad.push_back(std::move(c));
  }
  return out;
}

Membership membership(std::span<const Integer> y, const AdmissibleSetSpec& spec, const Rational& Y) {
  if (spec.conditions.failed) return {false, "failed-conditions"};
  if (!spec.box.contains(y, Y)) return {false, "box"};
  if (spec.prime) {
    const auto& pc = *spec.prime;
    const Integer& v = y[pc.index];
    Rational lo = pc.delta * Y, hi = 2 * pc.delta * Y;
    if (v < 2 || !(lo <= Rational(v) && Rational(v) <= hi) || !v.fits_ulong_p() || !ff::is_prime(v.get_ui()))
      return {false, "prime"};
  }
  if (spec.coprime) {
    const auto& c = *spec.coprime;
    if (gcd(c.beta_i * y[c.i], c.beta_j * y[c.j]) != 1) return {false, "coprime"};
  }
  if (spec.jacobi) {
    const auto& j = *spec.jacobi;
    const Integer& n = y[j.index];
    if (n <= 0 || n % 2 == 0 || ff::jacobi_symbol(j.G.evaluate(y), n) != 1) return {false, "jacobi"};
  }
  auto v = spec.conditions.first_violation(y);
  if (v < 0) return {false, "locus"};
  if (v > 0) return {false, "local:" + std::to_string(v)};
  return {true, ""};
}

void enumerate_admissible(const AdmissibleSetSpec& spec, const Rational& Y,
                          const std::function<void(const std::vector<Integer>&)>& visit, std::uint64_t budget) {
  auto hull = spec.box.integer_hull(Y);
  const std::size_t k = hull.size();
  Integer size = 1;
  for (const auto& [lo, hi] : hull) {
    if (hi < lo) return;
    size *= hi - lo + 1;
  }
  if (size > Integer(static_cast<unsigned long>(budget)))
    throw forms::BudgetExceeded("admissible-set hull has " + size.get_str() + " points");
  std::vector<Integer> y(k);
  for (std::size_t i = 0; i < k; ++i) y[i] = hull[i].first;
  while (true) {
    if (membership(y, spec, Y).member) visit(y);
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (++y[i] <= hull[i].second) break;
      y[i] = hull[i].first;
      if (i == 0) return;
    }
    if (k == 0) return;
  }
}

DensityEstimate density_estimate(const AdmissibleSetSpec& spec, const std::vector<Rational>& Y_list,
                                 std::uint64_t budget) {
  DensityEstimate out;
  const std::size_t k = spec.box.intervals.size();
  for (const auto& Y : Y_list) {
    DensityRow row;
    row.Y = Y;
    row.count = 0;
    enumerate_admissible(spec, Y, [&](const std::vector<Integer>&) { ++row.count; }, budget);
    Rational Yk = 1;
    for (std::size_t i = 0; i < k; ++i) Yk *= Y;
    row.density = Rational(row.count) / Yk;
    row.density.canonicalize();
    if (!out.rows.empty()) {
      row.delta = row.density - out.rows.back().density;
      row.delta->canonicalize();
    }
    out.rows.push_back(std::move(row));
  }
  const auto& cond = spec.conditions;
  if (!cond.locus_matrix.empty() && k >= 1) {
    // Affine locus points ~ p * (projective count); the tail sum over p > P is bounded by an integral.
    std::vector<std::int64_t> primes;
    for (auto p : {11, 13, 17, 19, 23})
      if (std::pow(double(p), double(k)) <= 2e6) primes.push_back(p);
    if (primes.size() >= 2) {
      auto probe = fibration::codim_probe(cond.locus_matrix, k, cond.locus_max_rank, primes, 1);
      double d = probe.fitted_projective_dim < 0 ? 0 : probe.fitted_projective_dim + 1;
      out.fitted_locus_dim = d;
      double c = 0;
      for (std::size_t i = 0; i < primes.size(); ++i)
        c = std::max(c, (1 + double(primes[i] - 1) * probe.counts[i]) / std::pow(double(primes[i]), d));
      double s = double(k) - d;
      double P = double(cond.prime_cutoff);
      out.tail_loss = s > 1 ? c * std::pow(P, 1 - s) / (s - 1) : INFINITY;
    }
  }
  return out;
}

std::string density_csv(const DensityEstimate& d) {
  std::string s = "Y,count,density,delta\n";
  for (const auto& r : d.rows) {
    s += r.Y.get_str() + "," + r.count.get_str() + "," + std::to_string(r.density.get_d()) + ",";
    if (r.delta) s += std::to_string(r.delta->get_d());
    s += "\n";
  }
  return s;
}

GcdBound gcd_bound_check(const AdmissibleSetSpec& spec, const Rational& Y, std::uint64_t budget) {
  GcdBound out;
  out.bound = 1;
  for (const auto& c : spec.conditions.bad) out.bound *= pow_int(c.p, 2 * c.v - 1);
  out.max_gcd = 0;
  enumerate_admissible(
      spec, Y,
      [&](const std::vector<Integer>& y) {
        Integer g = 0;
        for (const auto& v : y) g = gcd(g, v);
        out.max_gcd = std::max(out.max_gcd, g);
        ++out.members;
      },
      budget);
  out.holds = out.max_gcd <= out.bound;
  return out;
}

}  // namespace cubicfib::sieve
