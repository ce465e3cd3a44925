#include "cubicfib/lattice/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "cubicfib/ff/arith.hpp"

namespace cubicfib::lattice {

using forms::BudgetExceeded;
using forms::DimensionError;
using forms::RationalMatrix;

Integer dot(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size()) throw DimensionError("dot product of vectors of different length");
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Integer norm_sq(const IntVector& a) { return dot(a, a); }

Integer content(const IntVector& a) {
  Integer g = 0;
  for (const auto& x : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

Integer IntegerLattice::gram_determinant() const {
  forms::IntMatrix g(rank(), std::vector<Integer>(rank()));
  for (std::size_t i = 0; i < rank(); ++i)
    for (std::size_t j = 0; j < rank(); ++j) g[i][j] = dot(basis[i], basis[j]);
  return forms::integer_determinant(g);
}

bool IntegerLattice::contains(const IntVector& v) const {
  if (v.size() != ambient_dim) return false;
  const std::size_t k = rank();
  if (k == 0) return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
  // Coefficients c = (G G^T)^{-1} G v must be integral and reproduce v.
  RationalMatrix gram(k, k);
  std::vector<Rational> rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) gram(i, j) = dot(basis[i], basis[j]);
    rhs[i] = dot(basis[i], v);
  }
  auto inv = gram.inverse();
  if (!inv) throw DimensionError("lattice basis is dependent");
  auto c = *inv * rhs;
  IntVector w(ambient_dim, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (c[i].get_den() != 1) return false;
    for (std::size_t t = 0; t < ambient_dim; ++t) w[t] += c[i].get_num() * basis[i][t];
  }
  return w == v;
}

forms::IntMatrix unimodular_completion(const IntVector& a, Integer* g_out) {
  const std::size_t n = a.size();
  if (n == 0 || content(a) == 0) throw DimensionError("unimodular completion of the zero vector");
  forms::IntMatrix u(n, IntVector(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  IntVector v = a;
  for (std::size_t i = 1; i < n; ++i) {
    if (v[i] == 0) continue;
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), v[0].get_mpz_t(), v[i].get_mpz_t());
    Integer p = v[i] / g, q = v[0] / g;
    // Columns (0, i) <- (s c0 + t ci, -p c0 + q ci); the 2x2 block has determinant 1.
    for (std::size_t r = 0; r < n; ++r) {
      Integer c0 = u[r][0], ci = u[r][i];
      u[r][0] = s * c0 + t * ci;
      u[r][i] = -p * c0 + q * ci;
    }
    v[0] = g;
    v[i] = 0;
  }
  if (v[0] < 0) {
    for (std::size_t r = 0; r < n; ++r) u[r][0] = -u[r][0];
    v[0] = -v[0];
  }
  if (g_out) *g_out = v[0];
  return u;
}

IntegerLattice kernel_lattice(const IntVector& a) {
  Integer g;
  auto u = unimodular_completion(a, &g);
  IntegerLattice l;
  l.ambient_dim = a.size();
  for (std::size_t c = 1; c < a.size(); ++c) {
    IntVector col(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) col[r] = u[r][c];
    l.basis.push_back(std::move(col));
  }
  return lll_reduce(l).reduced;
}

namespace {

struct Gso {
  std::vector<std::vector<Rational>> mu;
  std::vector<Rational> bstar_sq;
};

Gso gram_schmidt(const std::vector<IntVector>& b) {
  const std::size_t k = b.size();
  const std::size_t n = k ? b[0].size() : 0;
  Gso out{std::vector<std::vector<Rational>>(k, std::vector<Rational>(k, 0)), std::vector<Rational>(k)};
  std::vector<std::vector<Rational>> star(k, std::vector<Rational>(n));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t t = 0; t < n; ++t) star[i][t] = b[i][t];
    for (std::size_t j = 0; j < i; ++j) {
      Rational d = 0;
      for (std::size_t t = 0; t < n; ++t) d += Rational(b[i][t]) * star[j][t];
      out.mu[i][j] = d / out.bstar_sq[j];
      for (std::size_t t = 0; t < n; ++t) star[i][t] -= out.mu[i][j] * star[j][t];
    }
    Rational s = 0;
    for (std::size_t t = 0; t < n; ++t) s += star[i][t] * star[i][t];
    if (s == 0) throw DimensionError("lattice basis is dependent");
    out.bstar_sq[i] = s;
    out.mu[i][i] = 1;
  }
  return out;
}

Integer round_nearest(const Rational& q) {
  // floor(q + 1/2)
  Rational h = q + Rational(1, 2);
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), h.get_num_mpz_t(), h.get_den_mpz_t());
  return r;
}

}  // namespace

LLLResult lll_reduce(const IntegerLattice& l, const Rational& delta) {
  const std::size_t k = l.rank();
  LLLResult out;
  out.reduced = l;
  out.transform.assign(k, IntVector(k, 0));
  for (std::size_t i = 0; i < k; ++i) out.transform[i][i] = 1;
  if (k <= 1) return out;
  auto& b = out.reduced.basis;
  auto& u = out.transform;
  auto subtract = [&](std::size_t i, std::size_t j, const Integer& q) {
    for (std::size_t t = 0; t < b[i].size(); ++t) b[i][t] -= q * b[j][t];
    for (std::size_t t = 0; t < k; ++t) u[i][t] -= q * u[j][t];
  };
  Gso g = gram_schmidt(b);
  std::size_t i = 1;
  while (i < k) {
    for (std::size_t jj = i; jj-- > 0;) {
      Integer q = round_nearest(g.mu[i][jj]);
      if (q == 0) continue;
      subtract(i, jj, q);
      for (std::size_t t = 0; t <= jj; ++t) g.mu[i][t] -= q * g.mu[jj][t];
    }
    Rational m = g.mu[i][i - 1];
    if (g.bstar_sq[i] < (delta - m * m) * g.bstar_sq[i - 1]) {
      std::swap(b[i], b[i - 1]);
      std::swap(u[i], u[i - 1]);
      g = gram_schmidt(b);
      i = std::max<std::size_t>(i - 1, 1);
    } else {
      ++i;
    }
  }
  return out;
}

bool is_lll_reduced(const IntegerLattice& l, const Rational& delta) {
  if (l.rank() <= 1) return true;
  Gso g = gram_schmidt(l.basis);
  for (std::size_t i = 1; i < l.rank(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (abs(g.mu[i][j]) > Rational(1, 2)) return false;
    Rational m = g.mu[i][i - 1];
    if (g.bstar_sq[i] < (delta - m * m) * g.bstar_sq[i - 1]) return false;
  }
  return true;
}

namespace {

// Floating Gram-Schmidt data of a reduced basis, used only for pruning; every accepted point is re-checked exactly.
struct FloatGso {
  std::vector<std::vector<long double>> mu;
  std::vector<long double> bstar_sq;
  std::vector<std::vector<long double>> star;
};

FloatGso float_gso(const std::vector<IntVector>& b) {
  Gso g = gram_schmidt(b);
  const std::size_t k = b.size(), n = k ? b[0].size() : 0;
  FloatGso f;
  f.mu.assign(k, std::vector<long double>(k));
  f.bstar_sq.resize(k);
  f.star.assign(k, std::vector<long double>(n));
  for (std::size_t i = 0; i < k; ++i) {
    f.bstar_sq[i] = g.bstar_sq[i].get_d();
    for (std::size_t j = 0; j < k; ++j) f.mu[i][j] = g.mu[i][j].get_d();
  }
  // b*_i = b_i - sum_j mu_ij b*_j
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t t = 0; t < n; ++t) {
      long double s = b[i][t].get_d();
      for (std::size_t j = 0; j < i; ++j) s -= f.mu[i][j] * f.star[j][t];
      f.star[i][t] = s;
    }
  return f;
}

constexpr long double kRelSlack = 1e-9L;

// Counts c in Z^k with |x0 + sum c_i b_i|^2 * den <= num.
class BallEnumerator {
 public:
  // Float data shared by both enumerators: GSO of the basis, x0 in GSO coordinates, and the radius split.
  struct Geometry {
    FloatGso gso;
    std::vector<long double> y;
    long double radius_sq = 0, orth_sq = 0;
  };

  static Geometry geometry(const std::vector<IntVector>& basis, const IntVector& x0, const Integer& num,
                           const Integer& den) {
    Geometry g{float_gso(basis), {}, 0, 0};
    const std::size_t k = basis.size();
    g.y.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      long double s = 0;
      for (std::size_t t = 0; t < x0.size(); ++t) s += x0[t].get_d() * g.gso.star[i][t];
      g.y[i] = s / g.gso.bstar_sq[i];
    }
    long double proj = 0, full = 0;
    for (std::size_t i = 0; i < k; ++i) proj += g.y[i] * g.y[i] * g.gso.bstar_sq[i];
    for (const auto& x : x0) full += x.get_d() * x.get_d();
    g.radius_sq = num.get_d() / den.get_d();
    g.orth_sq = full - proj > 0 ? full - proj : 0;
    return g;
  }

  BallEnumerator(const std::vector<IntVector>& basis, const IntVector& x0, Integer num, Integer den,
                 std::uint64_t budget)
      : b_(basis), x0_(x0), num_(std::move(num)), den_(std::move(den)), budget_(budget) {
    Geometry g = geometry(basis, x0, num_, den_);
    gso_ = std::move(g.gso);
    y_ = std::move(g.y);
    radius_sq_ = g.radius_sq;
    orth_sq_ = g.orth_sq;
    c_.assign(b_.size(), 0);
  }

  Integer count() {
    total_ = 0;
    if (b_.empty()) return point_ok(x0_) ? 1 : 0;
    partial_ = x0_;
    recurse(b_.size() - 1, radius_sq_ - orth_sq_);
    return total_;
  }

 private:
  bool point_ok(const IntVector& x) const { return norm_sq(x) * den_ <= num_; }

  void tick() {
    if (++visited_ > budget_) throw BudgetExceeded("lattice enumeration budget exceeded");
  }

  long double center(std::size_t i) const {
    long double s = y_[i];
    for (std::size_t j = i + 1; j < b_.size(); ++j) s += gso_.mu[j][i] * static_cast<long double>(c_[j]);
    return -s;
  }

  void recurse(std::size_t i, long double rem) {
    tick();
    long double slack = kRelSlack * (1 + radius_sq_);
    if (rem < -slack) return;
    long double ctr = center(i);
    long double r = std::sqrt(std::max<long double>(rem + slack, 0) / gso_.bstar_sq[i]);
    if (i == 0) {
      count_innermost(ctr, r);
      return;
    }
    auto lo = static_cast<long long>(std::ceil(ctr - r - 1e-9L));
    auto hi = static_cast<long long>(std::floor(ctr + r + 1e-9L));
    for (long long c = lo; c <= hi; ++c) {
      c_[i] = c;
      add_multiple(i, c);
      long double d = static_cast<long double>(c) - ctr;
      recurse(i - 1, rem - d * d * gso_.bstar_sq[i]);
      add_multiple(i, -c);
    }
    c_[i] = 0;
  }

  void add_multiple(std::size_t i, long long c) {
    if (c == 0) return;
    Integer cc = static_cast<long>(c);
    for (std::size_t t = 0; t < partial_.size(); ++t) partial_[t] += cc * b_[i][t];
  }

  // f(c) = |partial + c b_0|^2 is a convex quadratic, so the admissible c form an interval; the float estimate is
  // corrected exactly at both ends.
  void count_innermost(long double ctr, long double r) {
    const auto& v = b_[0];
    Integer pp = norm_sq(partial_), pv = dot(partial_, v), vv = norm_sq(v);
    auto ok = [&](const Integer& c) { return (pp + 2 * c * pv + c * c * vv) * den_ <= num_; };
    Integer lo = static_cast<long>(std::ceil(ctr - r)), hi = static_cast<long>(std::floor(ctr + r));
    if (lo > hi) {
      Integer nearest = static_cast<long>(std::llround(ctr));
      if (ok(nearest)) total_ += 1;
      return;
    }
    while (ok(lo - 1)) --lo;
    while (lo <= hi && !ok(lo)) ++lo;
    while (ok(hi + 1)) ++hi;
    while (hi >= lo && !ok(hi)) --hi;
    if (hi >= lo) total_ += hi - lo + 1;
  }

  const std::vector<IntVector>& b_;
  IntVector x0_;
  Integer num_, den_;
  std::uint64_t budget_;
  std::uint64_t visited_ = 0;
  FloatGso gso_;
  std::vector<long double> y_;
  long double radius_sq_ = 0, orth_sq_ = 0;
  std::vector<long long> c_;
  IntVector partial_;
  Integer total_;
};

// Machine-integer variant of BallEnumerator for small inputs. Coordinates stay in int64 and squared norms in
// __int128; count() returns nullopt as soon as a coordinate leaves the safe range, and the caller falls back.
class SmallBallEnumerator {
 public:
  static constexpr std::int64_t kEntryLimit = std::int64_t(1) << 24;
  static constexpr std::int64_t kCoordLimit = std::int64_t(1) << 40;

  static bool fits(const std::vector<IntVector>& basis, const IntVector& x0, const Integer& num, const Integer& den) {
    auto small = [](const Integer& v) { return abs(v) < kEntryLimit; };
    for (const auto& v : basis)
      if (!std::all_of(v.begin(), v.end(), small)) return false;
    return std::all_of(x0.begin(), x0.end(), small) && den == 1 && num < (Integer(1) << 50);
  }

  SmallBallEnumerator(const BallEnumerator::Geometry& geo, const std::vector<IntVector>& basis, const IntVector& x0,
                      const Integer& num, std::uint64_t budget)
      : geo_(geo), num_(num.get_si()), budget_(budget) {
    for (const auto& v : basis) {
      b_.emplace_back();
      for (const auto& e : v) b_.back().push_back(e.get_si());
    }
    for (const auto& e : x0) partial_.push_back(e.get_si());
    c_.assign(b_.size(), 0);
  }

  std::optional<Integer> count() {
    total_ = 0;
    overflow_ = false;
    recurse(b_.size() - 1, geo_.radius_sq - geo_.orth_sq);
    if (overflow_) return std::nullopt;
    Integer out;
    mpz_import(out.get_mpz_t(), 1, 1, sizeof(total_), 0, 0, &total_);
    return out;
  }

 private:
  void recurse(std::size_t i, long double rem) {
    if (overflow_) return;
    if (++visited_ > budget_) throw BudgetExceeded("lattice enumeration budget exceeded");
    long double slack = kRelSlack * (1 + geo_.radius_sq);
    if (rem < -slack) return;
    long double ctr = -geo_.y[i];
    for (std::size_t j = i + 1; j < b_.size(); ++j) ctr -= geo_.gso.mu[j][i] * static_cast<long double>(c_[j]);
    long double r = std::sqrt(std::max<long double>(rem + slack, 0) / geo_.gso.bstar_sq[i]);
    if (std::fabs(ctr) + r > static_cast<long double>(kCoordLimit)) {
      overflow_ = true;
      return;
    }
    if (i == 0) {
      count_innermost(ctr, r);
      return;
    }
    auto lo = static_cast<std::int64_t>(std::ceil(ctr - r - 1e-9L));
    auto hi = static_cast<std::int64_t>(std::floor(ctr + r + 1e-9L));
    for (std::int64_t c = lo; c <= hi && !overflow_; ++c) {
      c_[i] = c;
      if (!shift(i, c)) return;
      long double d = static_cast<long double>(c) - ctr;
      recurse(i - 1, rem - d * d * geo_.gso.bstar_sq[i]);
      shift(i, -c);
    }
    c_[i] = 0;
  }

  bool shift(std::size_t i, std::int64_t c) {
    for (std::size_t t = 0; t < partial_.size(); ++t) {
      partial_[t] += c * b_[i][t];
      if (partial_[t] > kCoordLimit || partial_[t] < -kCoordLimit) overflow_ = true;
    }
    return !overflow_;
  }

  void count_innermost(long double ctr, long double r) {
    const auto& v = b_[0];
    __int128 pp = 0, pv = 0, vv = 0;
    for (std::size_t t = 0; t < v.size(); ++t) {
      pp += static_cast<__int128>(partial_[t]) * partial_[t];
      pv += static_cast<__int128>(partial_[t]) * v[t];
      vv += static_cast<__int128>(v[t]) * v[t];
    }
    auto ok = [&](std::int64_t c) { return pp + 2 * c * pv + static_cast<__int128>(c) * c * vv <= num_; };
    auto lo = static_cast<std::int64_t>(std::ceil(ctr - r)), hi = static_cast<std::int64_t>(std::floor(ctr + r));
    if (lo > hi) {
      if (ok(static_cast<std::int64_t>(std::llround(ctr)))) total_ += 1;
      return;
    }
    while (ok(lo - 1)) --lo;
    while (lo <= hi && !ok(lo)) ++lo;
    while (ok(hi + 1)) ++hi;
    while (hi >= lo && !ok(hi)) --hi;
    if (hi >= lo) total_ += static_cast<std::uint64_t>(hi - lo + 1);
  }

  const BallEnumerator::Geometry& geo_;
  std::int64_t num_;
  std::uint64_t budget_;
  std::uint64_t visited_ = 0;
  std::vector<std::vector<std::int64_t>> b_;
  std::vector<std::int64_t> partial_, c_;
  std::uint64_t total_ = 0;
  bool overflow_ = false;
};

// Moves x0 close to the origin modulo the lattice by nearest-plane rounding.
IntVector babai_reduce(IntVector x0, const std::vector<IntVector>& b) {
  if (b.empty()) return x0;
  Gso g = gram_schmidt(b);
  const std::size_t k = b.size(), n = x0.size();
  // Exact nearest plane: coefficients of x0 against b*_i, peeled from the top level down.
  std::vector<std::vector<Rational>> star(k, std::vector<Rational>(n));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t t = 0; t < n; ++t) {
      Rational s = b[i][t];
      for (std::size_t j = 0; j < i; ++j) s -= g.mu[i][j] * star[j][t];
      star[i][t] = s;
    }
  for (std::size_t i = k; i-- > 0;) {
    Rational proj = 0;
    for (std::size_t t = 0; t < n; ++t) proj += Rational(x0[t]) * star[i][t];
    Integer q = round_nearest(proj / g.bstar_sq[i]);
    if (q == 0) continue;
    for (std::size_t t = 0; t < n; ++t) x0[t] -= q * b[i][t];
  }
  return x0;
}

}  // namespace

ShortestVector shortest_vector_exact(const IntegerLattice& l) {
  if (l.rank() == 0) throw DimensionError("shortest vector of the zero lattice");
  if (l.rank() > 8) throw BudgetExceeded("exact shortest vector is limited to rank 8");
  auto red = lll_reduce(l).reduced;
  ShortestVector best{red.basis[0], norm_sq(red.basis[0])};
  for (const auto& v : red.basis) {
    Integer s = norm_sq(v);
    if (s < best.norm_sq) best = {v, s};
  }
  // Count points of norm <= best; any strictly shorter nonzero vector appears in the enumeration.
  const std::size_t k = red.rank();
  FloatGso g = float_gso(red.basis);
  std::vector<long long> c(k, 0);
  IntVector partial(l.ambient_dim, 0);
  long double bound = best.norm_sq.get_d();
  std::uint64_t visited = 0;
  auto rec = [&](auto&& self, std::size_t i, long double rem) -> void {
    if (++visited > 100'000'000ull) throw BudgetExceeded("shortest-vector enumeration budget exceeded");
    long double slack = kRelSlack * (1 + bound);
    if (rem < -slack) return;
    long double ctr = 0;
    for (std::size_t j = i + 1; j < k; ++j) ctr -= g.mu[j][i] * static_cast<long double>(c[j]);
    long double r = std::sqrt(std::max<long double>(rem + slack, 0) / g.bstar_sq[i]);
    auto lo = static_cast<long long>(std::ceil(ctr - r - 1e-9L));
    auto hi = static_cast<long long>(std::floor(ctr + r + 1e-9L));
    for (long long x = lo; x <= hi; ++x) {
      c[i] = x;
      Integer xx = static_cast<long>(x);
      for (std::size_t t = 0; t < partial.size(); ++t) partial[t] += xx * red.basis[i][t];
      long double d = static_cast<long double>(x) - ctr;
      long double next = rem - d * d * g.bstar_sq[i];
      if (i > 0) {
        self(self, i - 1, next);
      } else {
        Integer s = norm_sq(partial);
        if (s != 0 && s < best.norm_sq) {
          best = {partial, s};
          bound = s.get_d();
        }
      }
      for (std::size_t t = 0; t < partial.size(); ++t) partial[t] -= xx * red.basis[i][t];
    }
    c[i] = 0;
  };
  rec(rec, k - 1, bound);
  return best;
}

Integer hyperplane_count_exact(const IntVector& a, const Integer& b, const Rational& B_sq, std::uint64_t budget) {
  if (a.empty()) throw DimensionError("hyperplane in dimension zero");
  if (content(a) != 1) throw std::domain_error("hyperplane count requires a primitive normal vector");
  Rational limit = B_sq - 1;
  limit.canonicalize();
  if (limit < 0) return 0;
  Integer g;
  auto u = unimodular_completion(a, &g);
  IntVector x0(a.size());
  for (std::size_t r = 0; r < a.size(); ++r) x0[r] = -b * u[r][0];
  auto lat = kernel_lattice(a);
  x0 = babai_reduce(std::move(x0), lat.basis);
  if (!lat.basis.empty() && SmallBallEnumerator::fits(lat.basis, x0, limit.get_num(), limit.get_den())) {
    auto geo = BallEnumerator::geometry(lat.basis, x0, limit.get_num(), limit.get_den());
    if (auto c = SmallBallEnumerator(geo, lat.basis, x0, limit.get_num(), budget).count()) return *c;
  }
  BallEnumerator e(lat.basis, x0, limit.get_num(), limit.get_den(), budget);
  return e.count();
}

Integer hyperplane_count_coprime(const IntVector& a, const Integer& b, const Rational& B_sq, const Integer& g,
                                 std::uint64_t budget) {
  if (g == 0) throw std::domain_error("coprimality modulus must be nonzero");
  Integer h = gcd(b, g);
  if (h == 0) h = abs(g);
  Integer total = 0;
  // x = d x' with a.x' + b/d = 0 and |x'|^2 <= (B^2 - 1)/d^2.
  for (const auto& d : ff::divisors(h)) {
    int mu = ff::mobius(d);
    if (mu == 0) continue;
    Rational bd = (B_sq - 1) / (Rational(d) * d) + 1;
    bd.canonicalize();
    total += mu * hyperplane_count_exact(a, b / d, bd, budget);
  }
  return total;
}

bool AsymptoticCount::within_budget() const {
  if (!exact) return true;
  return std::fabs(exact->get_d() - main) <= err_eta + err_lambda;
}

double unit_ball_volume(std::size_t n) { return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1); }

double eta_error_constant(std::size_t n) {
  // Shrinking the radius from B to sqrt(B^2 - 1 - b^2/|a|^2) loses at most max(k, 2) V_k B^{k - eta} volume, k = n-1.
  std::size_t k = n - 1;
  return static_cast<double>(std::max<std::size_t>(k, 2)) * unit_ball_volume(k);
}

double lambda_error_constant(std::size_t n) { return std::ldexp(std::tgamma(n + 1.0), static_cast<int>(n)); }

AsymptoticCount hyperplane_count_asymptotic(const IntVector& a, const Integer& b, const Integer& B, double eta,
                                            bool compute_exact) {
  const std::size_t n = a.size();
  if (n < 2) throw DimensionError("asymptotic hyperplane count needs n >= 2");
  if (!(eta > 0 && eta < 1)) throw std::domain_error("eta must lie in (0, 1)");
  if (content(a) != 1) throw std::domain_error("hyperplane count requires a primitive normal vector");
  double na = std::sqrt(norm_sq(a).get_d()), Bd = B.get_d();
  if (B <= 0 || std::fabs(b.get_d()) / na > std::pow(Bd, 1 - eta))
    throw std::domain_error("B is below (|b| / |a|)^{1/(1-eta)}");
  AsymptoticCount out;
  auto lat = kernel_lattice(a);
  double lambda1;
  if (lat.rank() <= 8) {
    out.lambda1_sq = shortest_vector_exact(lat).norm_sq;
    lambda1 = std::sqrt(out.lambda1_sq.get_d());
  } else {
    // An LLL-reduced first vector is within 2^{(k-1)/2} of the minimum.
    out.lambda1_sq = norm_sq(lat.basis[0]);
    lambda1 = std::sqrt(out.lambda1_sq.get_d()) / std::pow(2.0, (lat.rank() - 1) / 2.0);
  }
  out.main = unit_ball_volume(n - 1) * std::pow(Bd, double(n - 1)) / na;
  out.err_eta = eta_error_constant(n) * std::pow(Bd, double(n - 1) - eta) / na;
  double s = 0;
  for (std::size_t j = 0; j + 2 <= n; ++j) s += std::pow(Bd / lambda1, double(j));
  out.err_lambda = lambda_error_constant(n) * s;
  if (compute_exact) out.exact = hyperplane_count_exact(a, b, Rational(B * B));
  return out;
}

namespace {

// Gamma(m/2) as coefficient * pi^{e/2} with e in {0, 1}.
PiPower gamma_half(unsigned m) {
  if (m == 0) throw std::domain_error("Gamma has a pole at 0");
  if (m % 2 == 0) {
    Integer f = 1;
    for (unsigned i = 2; i < m / 2; ++i) f *= i;
    return {Rational(f), 0};
  }
  // Gamma(k + 1/2) = (2k)! / (4^k k!) sqrt(pi)
  unsigned k = (m - 1) / 2;
  Integer num = 1, den = 1;
  for (unsigned i = 1; i <= 2 * k; ++i) num *= i;
  for (unsigned i = 1; i <= k; ++i) den *= 4 * i;
  Rational c(num, den);
  c.canonicalize();
  return {c, 1};
}

}  // namespace

double PiPower::value() const { return coefficient.get_d() * std::pow(M_PI, half_pi_power / 2.0); }

PiPower volume_constant(std::size_t l) {
  PiPower out{Rational(1), 0};
  for (std::size_t j = 0; j + 2 <= l; ++j) {
    PiPower a = gamma_half(1), b = gamma_half(static_cast<unsigned>(j + 1)), c = gamma_half(static_cast<unsigned>(j + 2));
    out.coefficient *= a.coefficient * b.coefficient / c.coefficient;
    out.half_pi_power += a.half_pi_power + b.half_pi_power - c.half_pi_power;
  }
  out.coefficient.canonicalize();
  return out;
}

double ball_slice_volume(std::size_t l, double B, double a) {
  if (B * B < a * a) throw std::domain_error("slice offset exceeds the radius");
  if (l == 0) return 1;
  // The u-integral runs over the signed range (-rho, rho), contributing the factor 2 / l.
  return 2.0 / double(l) * volume_constant(l).value() * std::pow(B * B - a * a, double(l) / 2.0);
}

}  // namespace cubicfib::lattice
