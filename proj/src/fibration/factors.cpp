#include <algorithm>
#include <cmath>
#include <random>

#include "cubicfib/ff/arith.hpp"
#include "cubicfib/fibration/fibration.hpp"
#include "cubicfib/lattice/lattice.hpp"

namespace cubicfib::fibration {

namespace {

// Coefficients low to high.
using UPoly = std::vector<Integer>;
using QPoly = std::vector<Rational>;

void trim(UPoly& u) {
  while (!u.empty() && u.back() == 0) u.pop_back();
}

long double eval_ld(const UPoly& u, long double t) {
  long double s = 0;
  for (auto it = u.rbegin(); it != u.rend(); ++it) s = s * t + it->get_d();
  return s;
}

UPoly derivative(const UPoly& u) {
  UPoly d;
  for (std::size_t i = 1; i < u.size(); ++i) d.push_back(u[i] * static_cast<unsigned long>(i));
  return d;
}

// Approximate real roots of u and of all its derivatives (the latter catch multiple roots).
std::vector<long double> real_root_candidates(const UPoly& u) {
  if (u.size() <= 1) return {};
  auto crit = real_root_candidates(derivative(u));
  std::sort(crit.begin(), crit.end());
  long double bound = 1;
  const long double lc = u.back().get_d();
  for (std::size_t i = 0; i + 1 < u.size(); ++i) bound = std::max(bound, 1 + std::fabs(u[i].get_d() / lc));
  std::vector<long double> pts{-bound};
  for (auto c : crit)
    if (c > -bound && c < bound) pts.push_back(c);
  pts.push_back(bound);
  std::vector<long double> out = crit;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    long double lo = pts[k], hi = pts[k + 1];
    long double flo = eval_ld(u, lo), fhi = eval_ld(u, hi);
    if (flo == 0) {
      out.push_back(lo);
      continue;
    }
    if ((flo < 0) == (fhi < 0)) continue;
    for (int it = 0; it < 200 && hi - lo > 0; ++it) {
      long double mid = (lo + hi) / 2;
      if (mid == lo || mid == hi) break;
      long double fm = eval_ld(u, mid);
      if ((fm < 0) == (flo < 0)) lo = mid;
      else hi = mid;
    }
    out.push_back((lo + hi) / 2);
  }
  return out;
}

bool is_root(const UPoly& u, const Rational& x) {
  Rational s = 0;
  for (auto it = u.rbegin(); it != u.rend(); ++it) s = s * x + *it;
  return s == 0;
}

// Rational roots of a nonzero integer polynomial. Numeric location, exact confirmation.
std::vector<Rational> rational_roots(UPoly u) {
  trim(u);
  std::vector<Rational> roots;
  if (u.empty()) throw std::invalid_argument("rational_roots of the zero polynomial");
  if (u[0] == 0) {
    roots.emplace_back(0);
    while (u[0] == 0) u.erase(u.begin());
  }
  if (u.size() <= 1) return roots;
  auto dens = ff::divisors(abs(u.back()));
  for (auto x : real_root_candidates(u)) {
    for (const auto& q : dens) {
      long double scaled = x * q.get_d();
      if (std::fabs(scaled) > 1e18L) continue;
      auto base = static_cast<long long>(std::llround(scaled));
      for (long long p = base - 1; p <= base + 1; ++p) {
        Rational cand(Integer(static_cast<long>(p)), q);
        cand.canonicalize();
        if (std::find(roots.begin(), roots.end(), cand) == roots.end() && is_root(u, cand)) roots.push_back(cand);
      }
    }
  }
  return roots;
}

IntPolynomial linear_form(std::size_t h, const std::vector<Integer>& c) {
  IntPolynomial l(h);
  for (std::size_t i = 0; i < h; ++i) {
    forms::Exponent e(h, 0);
    e[i] = 1;
    l.add_term(e, c[i]);
  }
  return l;
}

std::vector<Integer> linear_coefficients(const IntPolynomial& l) {
  std::vector<Integer> c(l.num_vars(), 0);
  for (const auto& [e, v] : l.terms())
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] == 1) c[i] = v;
  return c;
}

// Integer primitive vector proportional to c, first nonzero entry positive.
std::vector<Integer> primitive(const std::vector<Rational>& c) {
  Integer den = 1;
  for (const auto& x : c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> v(c.size());
  Integer g = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    Rational s = c[i] * den;
    v[i] = s.get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v[i].get_mpz_t());
  }
  if (g == 0) return v;
  auto first = std::find_if(v.begin(), v.end(), [](const Integer& x) { return x != 0; });
  if (*first < 0) g = -g;
  for (auto& x : v) x /= g;
  return v;
}

struct Rowspace {
  std::vector<std::vector<Rational>> basis;  // echelon rows
  std::vector<std::size_t> pivots;

  // Adds v if independent; returns whether it was added.
  bool add(std::vector<Rational> v) {
    reduce(v);
    auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
    if (it == v.end()) return false;
    std::size_t p = static_cast<std::size_t>(it - v.begin());
    Rational lead = v[p];
    for (auto& x : v) x /= lead;
    basis.push_back(v);
    pivots.push_back(p);
    return true;
  }
  void reduce(std::vector<Rational>& v) const {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      Rational f = v[pivots[k]];
      if (f == 0) continue;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f * basis[k][i];
    }
  }
  bool contains(std::vector<Rational> v) const {
    reduce(v);
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
  }
};

std::vector<Rational> to_rational(const std::vector<Integer>& v) { return {v.begin(), v.end()}; }

// Coordinates of v in the basis rows (assumed independent and spanning v).
std::vector<Rational> coordinates(const std::vector<std::vector<Rational>>& rows, const std::vector<Rational>& v) {
  const std::size_t k = rows.size(), h = v.size();
  RationalMatrix a(h, k);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < k; ++j) a(i, j) = rows[j][i];
  // Normal equations: (A^T A) c = A^T v.
  auto at = a.transpose();
  auto inv = (at * a).inverse();
  if (!inv) throw std::logic_error("dependent basis");
  return *inv * (at * v);
}

// Full-rank square matrix whose first rows are the given ones, completed by unit vectors.
RationalMatrix complete_rows(const std::vector<std::vector<Rational>>& rows, std::size_t h) {
  Rowspace span;
  std::vector<std::vector<Rational>> all;
  for (const auto& r : rows) {
    if (!span.add(r)) throw std::logic_error("rows are dependent");
    all.push_back(r);
  }
  for (std::size_t i = 0; i < h && all.size() < h; ++i) {
    std::vector<Rational> e(h, 0);
    e[i] = 1;
    if (span.add(e)) all.push_back(e);
  }
  return RationalMatrix::from_rows(all);
}

// Psi(x, T^{-1} y') in x-first variables, times den^3 where den clears T^{-1}.
std::pair<IntPolynomial, Integer> in_new_coordinates(const IntPolynomial& psi, std::size_t num_x,
                                                     const RationalMatrix& t) {
  const std::size_t h = t.rows(), n = num_x + h;
  auto inv = t.inverse();
  if (!inv) throw std::logic_error("singular coordinate change");
  Integer den = inv->common_denominator();
  LinearChange ch;
  ch.denominator = den;
  ch.matrix.assign(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < num_x; ++i) ch.matrix[i][i] = den;
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      Rational e = (*inv)(i, j) * den;
      ch.matrix[num_x + i][num_x + j] = e.get_num();
    }
  return {forms::substitute_linear(psi, ch), den};
}

}  // namespace

std::vector<IntPolynomial> linear_factors(const IntPolynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("linear_factors of the zero polynomial");
  if (!p.is_homogeneous()) throw forms::DimensionError("linear_factors expects a homogeneous polynomial");
  const std::size_t h = p.num_vars();
  const int deg = p.total_degree();
  std::vector<IntPolynomial> out;
  if (deg <= 0) return out;
  auto add = [&](std::vector<Integer> c) {
    auto v = primitive(to_rational(c));
    auto l = linear_form(h, v);
    if (std::find(out.begin(), out.end(), l) == out.end() && forms::exact_divide(p, l)) out.push_back(l);
  };
  if (h == 1) {
    add({Integer(1)});
    return out;
  }
  // Shear so that P(g) != 0 with g_0 = 1; then every factor has a nonzero z_0 coefficient.
  std::vector<Integer> g(h, 0);
  g[0] = 1;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> small(-3, 3);
  for (int attempt = 0; p.evaluate(g) == 0; ++attempt) {
    if (attempt > 10000) throw std::logic_error("no nonvanishing point found");
    for (std::size_t i = 1; i < h; ++i) g[i] = small(rng);
  }
  std::vector<IntPolynomial> images;
  for (std::size_t i = 0; i < h; ++i) {
    auto im = IntPolynomial::variable(h, i);
    if (i > 0 && g[i] != 0) im += IntPolynomial::variable(h, 0) * g[i];
    images.push_back(im);
  }
  auto sheared = p.compose(images);

  // A factor z_0 + sum c_i z_i vanishes at -c_i e_0 + e_i, so c_i is a root of u_i(t) = P'(-t e_0 + e_i).
  std::vector<std::vector<Rational>> cands(h);
  for (std::size_t i = 1; i < h; ++i) {
    UPoly u(static_cast<std::size_t>(deg) + 1, 0);
    for (const auto& [e, c] : sheared.terms()) {
      if (e[0] + e[i] != static_cast<unsigned>(deg)) continue;
      u[e[0]] += (e[0] % 2 ? -c : c);
    }
    cands[i] = rational_roots(u);
    if (cands[i].empty()) return out;
  }

  std::vector<Rational> c(h, 0);
  c[0] = 1;
  std::vector<std::size_t> zeroed;
  auto restricted = [&](std::size_t upto, const IntPolynomial& q) {
    std::vector<std::size_t> vars;
    for (std::size_t i = upto + 1; i < h; ++i) vars.push_back(i);
    std::vector<Integer> zeros(vars.size(), 0);
    return q.specialize(vars, zeros);
  };
  std::vector<IntPolynomial> partial_p(h);
  for (std::size_t k = 1; k < h; ++k) partial_p[k] = restricted(k, sheared);

  auto dfs = [&](auto&& self, std::size_t k) -> void {
    if (k == h) {
      std::vector<Rational> y(h, 0);
      Rational s = 1;
      for (std::size_t i = 1; i < h; ++i) {
        s -= c[i] * g[i];
        y[i] = c[i];
      }
      y[0] = s;
      add(primitive(y));
      return;
    }
    for (const auto& root : cands[k]) {
      c[k] = root;
      std::vector<Rational> partial(c.begin(), c.begin() + static_cast<long>(k) + 1);
      partial.resize(h, 0);
      if (forms::exact_divide(partial_p[k], linear_form(h, primitive(partial)))) self(self, k + 1);
    }
    c[k] = 0;
  };
  dfs(dfs, 1);
  return out;
}

std::optional<CommonFactor> common_linear_factor(const std::vector<IntPolynomial>& polys) {
  auto first = std::find_if(polys.begin(), polys.end(), [](const IntPolynomial& p) { return !p.is_zero(); });
  if (first == polys.end()) return std::nullopt;
  for (const auto& l : linear_factors(*first)) {
    CommonFactor cf{l, {}};
    bool all = true;
    for (const auto& p : polys) {
      if (p.is_zero()) {
        cf.cofactors.emplace_back(p.num_vars());
        continue;
      }
      auto q = forms::exact_divide(p, l);
      if (!q) {
        all = false;
        break;
      }
      cf.cofactors.push_back(*q);
    }
    if (all) return cf;
  }
  return std::nullopt;
}

std::optional<CommonFactor> detect_common_linear_factor_Qi(const FibrationData& fd) {
  if (std::all_of(fd.parts.q.begin(), fd.parts.q.end(), [](const IntPolynomial& q) { return q.is_zero(); }))
    throw forms::DimensionError("every Q_i vanishes: the form has no fibre-linear part");
  return common_linear_factor(fd.parts.q);
}

PolyMatrix QuadricBundle::y_hessian() const {
  const std::size_t v = psi.size();
  PolyMatrix m(num_y, std::vector<IntPolynomial>(num_y, IntPolynomial(v)));
  for (std::size_t i = 0; i < v; ++i) {
    if (psi[i].is_zero()) continue;
    auto hess = forms::quadratic_data(psi[i]).hessian();
    auto xi = IntPolynomial::variable(v, i);
    for (std::size_t a = 0; a < num_y; ++a)
      for (std::size_t b = 0; b < num_y; ++b)
        if (hess[a][b] != 0) m[a][b] += xi * hess[a][b];
  }
  return m;
}

IntPolynomial QuadricBundle::as_polynomial() const {
  const std::size_t v = psi.size(), n = v + num_y;
  std::vector<std::size_t> ymap(num_y);
  for (std::size_t j = 0; j < num_y; ++j) ymap[j] = v + j;
  IntPolynomial out(n);
  for (std::size_t i = 0; i < v; ++i) out += IntPolynomial::variable(n, i) * psi[i].embed(n, ymap);
  return out;
}

QuadricBundle bundle_of(const FibrationData& fd) { return {fd.parts.q, fd.param_dim()}; }

std::string to_string(Rank2Shape s) {
  switch (s) {
    case Rank2Shape::TwoForms: return "two-forms";
    case Rank2Shape::FactoredProduct: return "factored-product";
    case Rank2Shape::GeometricallyIntegral: return "geometrically-integral";
    default: return "none";
  }
}

std::string to_string(FactorStatus s) {
  switch (s) {
    case FactorStatus::LinearFactor: return "linear-factor";
    case FactorStatus::NonlinearSuspected: return "nonlinear-suspected";
    case FactorStatus::Unknown: return "unknown";
    default: return "none";
  }
}

namespace {

// Delta_{b,b} Delta_{i,j} = Delta_{b,i} Delta_{b,j} with Delta_{i,j} = h_aa h_ij - h_ai h_aj, for i, j outside {a}.
bool delta_relations_hold(const PolyMatrix& hm) {
  const std::size_t h = hm.size();
  for (std::size_t a = 0; a < h; ++a) {
    if (hm[a][a].is_zero()) continue;
    auto delta = [&](std::size_t i, std::size_t j) { return hm[a][a] * hm[i][j] - hm[a][i] * hm[a][j]; };
    for (std::size_t b = 0; b < h; ++b) {
      if (b == a || delta(b, b).is_zero()) continue;
      auto dbb = delta(b, b);
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = i; j < h; ++j) {
          if (i == a || j == a) continue;
          if (!(dbb * delta(i, j) == delta(b, i) * delta(b, j))) return false;
        }
      return true;
    }
  }
  return false;
}

PolyMatrix change_y(const PolyMatrix& hm, const IntMatrix& t) {
  // H' = T^T H T for y = T y'.
  const std::size_t h = hm.size();
  const std::size_t v = h ? hm[0][0].num_vars() : 0;
  PolyMatrix tmp(h, std::vector<IntPolynomial>(h, IntPolynomial(v))), out = tmp;
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j)
      for (std::size_t k = 0; k < h; ++k)
        if (t[k][j] != 0) tmp[i][j] += hm[i][k] * t[k][j];
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j)
      for (std::size_t k = 0; k < h; ++k)
        if (t[k][i] != 0) out[i][j] += tmp[k][j] * t[k][i];
  return out;
}

}  // namespace

Rank2Classification classify_rank2_bundle(const QuadricBundle& bundle) {
  Rank2Classification out;
  const std::size_t v = bundle.psi.size(), h = bundle.num_y;
  auto hm = bundle.y_hessian();
  out.rank_over_K = fibration_rank(hm, v).rank;

  Rowspace psi_span;
  out.x_nondegenerate = true;
  for (const auto& p : bundle.psi) {
    auto qd = forms::quadratic_data(p.is_zero() ? IntPolynomial(h) : p).hessian();
    std::vector<Rational> flat;
    for (const auto& row : qd)
      for (const auto& x : row) flat.emplace_back(x);
    if (!psi_span.add(flat)) out.x_nondegenerate = false;
  }
  if (out.rank_over_K >= 3) {
    out.shape = Rank2Shape::GeometricallyIntegral;
    return out;
  }
  if (out.rank_over_K < 2) return out;

  // The rank-one Schur complement relation, after a random integral change if no diagonal entry survives.
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> small(-3, 3);
  PolyMatrix work = hm;
  for (int attempt = 0; attempt < 50 && !(out.delta_relations_verified = delta_relations_hold(work)); ++attempt) {
    IntMatrix t(h, std::vector<Integer>(h, 0));
    do
      for (auto& row : t)
        for (auto& x : row) x = small(rng);
    while (forms::integer_determinant(t) == 0);
    work = change_y(hm, t);
  }

  const auto psi_poly = bundle.as_polynomial();
  // TwoForms: the y-forms that Psi involves span at most two dimensions.
  Rowspace used;
  std::vector<std::vector<Rational>> used_rows;
  for (const auto& p : bundle.psi) {
    if (p.is_zero()) continue;
    for (const auto& row : forms::quadratic_data(p).hessian()) {
      auto r = to_rational(row);
      if (used.add(r)) used_rows.push_back(r);
    }
  }
  if (used_rows.size() <= 2) {
    out.shape = Rank2Shape::TwoForms;
    std::vector<std::vector<Rational>> rows;
    for (const auto& r : used_rows) rows.push_back(to_rational(primitive(r)));
    out.change = complete_rows(rows, h);
    auto [sub, den] = in_new_coordinates(psi_poly, v, out.change);
    std::vector<std::size_t> rest;
    for (std::size_t j = 2; j < h; ++j) rest.push_back(v + j);
    out.identity_verified = sub.degree_in(rest) == 0;
    return out;
  }

  auto cf = common_linear_factor(bundle.psi);
  if (!cf) {
    out.alarm = "rank 2 over Q(x) with " + std::to_string(used_rows.size()) +
                " essential y-forms but no common linear factor of the psi_i";
    return out;
  }
  out.factor = cf->l;
  auto lvec = to_rational(linear_coefficients(cf->l));
  Rowspace w;
  std::vector<std::vector<Rational>> wbasis;
  std::vector<std::vector<Rational>> cof(v);
  for (std::size_t j = 0; j < v; ++j) {
    cof[j] = cf->cofactors[j].is_zero() ? std::vector<Rational>(h, 0)
                                         : to_rational(linear_coefficients(cf->cofactors[j]));
    if (w.add(cof[j])) wbasis.push_back(cof[j]);
  }
  std::vector<std::vector<Rational>> rows;
  std::vector<std::vector<Rational>> wcoords_basis;  // basis of W in the order a11, a1_3, ...
  if (!w.contains(lvec)) {
    // kappa = 1: y1' = (l + u)/2, y2' = (l - u)/2, u the first basis vector of W.
    out.kappa = 1;
    const auto& u = wbasis[0];
    std::vector<Rational> y1(h), y2(h);
    for (std::size_t i = 0; i < h; ++i) {
      y1[i] = (lvec[i] + u[i]) / 2;
      y2[i] = (lvec[i] - u[i]) / 2;
    }
    rows = {y1, y2};
    for (std::size_t k = 1; k < wbasis.size(); ++k) rows.push_back(wbasis[k]);
    wcoords_basis = wbasis;
  } else if (wbasis.size() + 1 <= h) {
    // kappa = 0: y1' = l, the rest of W after it, y2' a free completion.
    out.kappa = 0;
    Rowspace with_l;
    with_l.add(lvec);
    wcoords_basis.push_back(lvec);
    std::vector<std::vector<Rational>> others;
    for (const auto& b : wbasis)
      if (with_l.add(b)) others.push_back(b);
    for (const auto& b : others) wcoords_basis.push_back(b);
    Rowspace span;
    span.add(lvec);
    for (const auto& b : others) span.add(b);
    std::vector<Rational> y2;
    for (std::size_t i = 0; i < h && y2.empty(); ++i) {
      std::vector<Rational> e(h, 0);
      e[i] = 1;
      if (!span.contains(e)) y2 = e;
    }
    rows = {lvec, y2};
    for (const auto& b : others) rows.push_back(b);
  } else {
    out.alarm = "rank 2 over Q(x) with linear factor " + cf->l.to_string() +
                " whose cofactors span every y-form including the factor: neither two-variable nor "
                "(y1 + k y2)(a11 (y1 - k y2) + sum a1i yi) shape";
    return out;
  }
  out.change = complete_rows(rows, h);

  // Cofactor j in coordinates of wcoords_basis gives the x_j coefficients of a11, a1_3, ...
  std::vector<std::vector<Rational>> a_coeffs(wcoords_basis.size(), std::vector<Rational>(v, 0));
  for (std::size_t j = 0; j < v; ++j) {
    if (std::all_of(cof[j].begin(), cof[j].end(), [](const Rational& x) { return x == 0; })) continue;
    auto co = coordinates(wcoords_basis, cof[j]);
    for (std::size_t k = 0; k < co.size(); ++k) a_coeffs[k][j] = co[k];
  }
  Integer scale = 1;
  for (const auto& row : a_coeffs)
    for (const auto& x : row) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), x.get_den_mpz_t());
  out.scale = scale;
  auto int_form = [&](const std::vector<Rational>& r) {
    std::vector<Integer> c(v);
    for (std::size_t j = 0; j < v; ++j) {
      Rational s = r[j] * scale;
      c[j] = s.get_num();
    }
    return linear_form(v, c);
  };
  out.a11 = int_form(a_coeffs[0]);
  for (std::size_t k = 1; k < a_coeffs.size(); ++k) out.a1.push_back(int_form(a_coeffs[k]));

  // scale * Psi(x, T^{-1} y') == (y1' + kappa y2')(a11 (y1' - kappa y2') + sum a1i y_i').
  const std::size_t n = v + h;
  std::vector<std::size_t> xmap(v);
  for (std::size_t j = 0; j < v; ++j) xmap[j] = j;
  auto Y = [&](std::size_t i) { return IntPolynomial::variable(n, v + i); };
  const Integer k = out.kappa.get_num();
  IntPolynomial inner = out.a11.embed(n, xmap) * (Y(0) - Y(1) * k);
  for (std::size_t i = 0; i < out.a1.size(); ++i) inner += out.a1[i].embed(n, xmap) * Y(2 + i);
  IntPolynomial rhs = (Y(0) + Y(1) * k) * inner;
  auto [sub, den] = in_new_coordinates(psi_poly, v, out.change);
  out.identity_verified = sub * scale == rhs * (den * den * den);
  out.shape = out.identity_verified ? Rank2Shape::FactoredProduct : Rank2Shape::None;
  if (!out.identity_verified) out.alarm = "constructed factorization identity failed";
  return out;
}

MinorFactorResult order3_minor_common_factor(const FibrationData& fd, std::uint64_t seed,
                                             const std::vector<std::int64_t>& probe_primes) {
  if (fd.rank < 3) throw std::domain_error("order-3 minors need fibration rank at least 3");
  const std::size_t h = fd.param_dim();
  MinorFactorResult out;
  out.codim = codim_probe(fd.hessian, h, 2, probe_primes, seed);
  std::vector<Minor> minors;
  try {
    minors = nonzero_minors(fd.hessian, 3);
  } catch (const forms::BudgetExceeded&) {
    out.status = FactorStatus::Unknown;
    return out;
  }
  out.nonzero_minors = minors.size();
  std::vector<IntPolynomial> values;
  for (auto& m : minors) values.push_back(m.value);
  if (auto cf = common_linear_factor(values)) {
    out.status = FactorStatus::LinearFactor;
    out.factor = cf->l;
    Integer g;
    out.param_change = lattice::unimodular_completion(linear_coefficients(cf->l), &g);
    std::vector<IntPolynomial> images;
    for (std::size_t i = 0; i < h; ++i) {
      IntPolynomial im(h);
      for (std::size_t k = 0; k < h; ++k)
        if (out.param_change[i][k] != 0) im += IntPolynomial::variable(h, k) * out.param_change[i][k];
      images.push_back(im);
    }
    out.transformed = fd.hessian;
    for (auto& row : out.transformed)
      for (auto& e : row) e = e.compose(images);
    PolyMatrix slice = out.transformed;
    std::vector<std::size_t> first{0};
    std::vector<Integer> zero{0};
    for (auto& row : slice)
      for (auto& e : row) e = e.specialize(first, zero);
    out.slice_rank_verified = forms::symbolic_rank(slice).rank <= 2;
    return out;
  }

  // No common linear factor: look for a shared factor of higher degree along a random line.
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(-1000, 1000);
  std::vector<IntPolynomial> line(h);
  for (std::size_t i = 0; i < h; ++i) {
    line[i] = IntPolynomial::constant(1, Integer(dist(rng))) + IntPolynomial::variable(1, 0) * Integer(dist(rng));
  }
  QPoly gcd;
  auto to_q = [](const IntPolynomial& p) {
    QPoly q(static_cast<std::size_t>(std::max(p.total_degree(), 0)) + 1, 0);
    for (const auto& [e, c] : p.terms()) q[e[0]] += c;
    while (!q.empty() && q.back() == 0) q.pop_back();
    return q;
  };
  auto qgcd = [](QPoly a, QPoly b) {
    while (!b.empty()) {
      while (a.size() >= b.size() && !a.empty()) {
        Rational f = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        while (!a.empty() && a.back() == 0) a.pop_back();
      }
      std::swap(a, b);
    }
    return a;
  };
  for (const auto& v : values) {
    auto q = to_q(v.compose(line));
    gcd = gcd.empty() ? q : qgcd(gcd, q);
  }
  if (gcd.size() >= 2) out.status = fd.rank >= 5 ? FactorStatus::NonlinearSuspected : FactorStatus::Unknown;
  else out.status = FactorStatus::None;
  return out;
}

}  // namespace cubicfib::fibration
