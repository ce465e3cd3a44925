#include <algorithm>
#include <numeric>
#include <random>

#include "cubicfib/fibration/fibration.hpp"

namespace cubicfib::fibration {

namespace {

constexpr long kRandomRange = 1'000'000;
constexpr std::size_t kMinorExpansionCap = 4096;

std::vector<Integer> random_point(std::mt19937_64& rng, std::size_t h, long range) {
  std::uniform_int_distribution<long> dist(-range, range);
  std::vector<Integer> y(h);
  for (auto& v : y) v = dist(rng);
  return y;
}

std::vector<std::size_t> local_index(const std::vector<std::size_t>& globals, std::size_t n) {
  std::vector<std::size_t> local(n, n);
  for (std::size_t i = 0; i < globals.size(); ++i) local[globals[i]] = i;
  return local;
}

// Pivot rows and columns of a nonsingular maximal minor of a constant matrix.
forms::SymbolicRank constant_pivots(const IntMatrix& m, std::size_t vars) {
  PolyMatrix p(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (const auto& x : m[i]) p[i].push_back(IntPolynomial::constant(vars, x));
  return forms::symbolic_rank(p);
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<std::size_t>> all_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  subsets(n, k, 0, cur, out);
  return out;
}

IntMatrix constant_hessian(const IntPolynomial& quadratic) { return forms::quadratic_data(quadratic).hessian(); }

// Q_y(x) = sum_i y_i F_i(x) in all n variables.
IntPolynomial quadratic_part(const FibrationData& fd) {
  IntPolynomial q(fd.n);
  const auto& sx = fd.split.x_indices;
  for (std::size_t i = 0; i < fd.parts.F.size(); ++i)
    q += IntPolynomial::variable(fd.n, fd.split.y_indices[i]) * fd.parts.F[i].embed(fd.n, sx);
  return q;
}

}  // namespace

std::vector<Minor> nonzero_minors(const PolyMatrix& m, std::size_t order) {
  const std::size_t d = m.size();
  if (d > 12) throw forms::BudgetExceeded("minor enumeration is capped at dimension 12");
  std::vector<Minor> out;
  auto sets = all_subsets(d, order);
  for (const auto& rows : sets)
    for (const auto& cols : sets) {
      auto det = forms::symbolic_determinant(forms::poly_submatrix(m, rows, cols));
      if (!det.is_zero()) out.push_back({rows, cols, std::move(det)});
    }
  return out;
}

IntPolynomial Decomposition::reassemble(const VariableSplit& split, std::size_t n) const {
  IntPolynomial c = R.embed(n, split.y_indices);
  for (std::size_t i = 0; i < F.size(); ++i)
    c += IntPolynomial::variable(n, split.y_indices[i]) * F[i].embed(n, split.x_indices);
  for (std::size_t j = 0; j < q.size(); ++j)
    c += IntPolynomial::variable(n, split.x_indices[j]) * q[j].embed(n, split.y_indices);
  return c;
}

Decomposition decompose(const IntPolynomial& cubic, const VariableSplit& split) {
  const std::size_t n = cubic.num_vars();
  split.validate(n);
  if (!cubic.is_zero() && (cubic.total_degree() != 3 || !cubic.is_homogeneous()))
    throw forms::DimensionError("the input must be a homogeneous cubic form");
  const std::size_t d = split.x_indices.size(), h = split.y_indices.size();
  auto lx = local_index(split.x_indices, n), ly = local_index(split.y_indices, n);
  Decomposition out;
  out.F.assign(h, IntPolynomial(d));
  out.q.assign(d, IntPolynomial(h));
  out.R = IntPolynomial(h);
  for (const auto& [e, c] : cubic.terms()) {
    forms::Exponent ex(d, 0), ey(h, 0);
    unsigned dx = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (lx[v] < n) {
        ex[lx[v]] = e[v];
        dx += e[v];
      } else {
        ey[ly[v]] = e[v];
      }
    }
    switch (dx) {
      case 3:
        throw forms::DimensionError("monomial " + IntPolynomial::monomial(e, c).to_string() +
                                    " is cubic in the fibre variables; the split is not an h-decomposition");
      case 2: {
        auto i = static_cast<std::size_t>(std::find(ey.begin(), ey.end(), 1u) - ey.begin());
        out.F[i].add_term(ex, c);
        break;
      }
      case 1: {
        auto j = static_cast<std::size_t>(std::find(ex.begin(), ex.end(), 1u) - ex.begin());
        out.q[j].add_term(ey, c);
        break;
      }
      default:
        out.R.add_term(ey, c);
    }
  }
  return out;
}

RankResult fibration_rank(const PolyMatrix& m, std::size_t num_params, std::uint64_t seed, unsigned trials) {
  RankResult out;
  out.record.seed = seed;
  out.record.trials = trials;
  const std::size_t d = m.size();
  out.witness_minor = IntPolynomial::constant(num_params, 1);
  if (d == 0) {
    out.all_larger_minors_vanish = out.larger_minors_expanded = true;
    return out;
  }
  std::mt19937_64 rng(seed);
  std::vector<Integer> best_point;
  for (unsigned t = 0; t < trials; ++t) {
    auto y = random_point(rng, num_params, kRandomRange);
    auto r = forms::integer_rank(forms::evaluate_matrix(m, y));
    if (best_point.empty() || r > out.rank) {
      out.rank = r;
      best_point = y;
    }
  }
  out.record.estimate = out.rank;
  auto symbolic = forms::symbolic_rank(m);
  if (symbolic.rank != out.rank)
    throw SymbolicMismatch("randomized rank " + std::to_string(out.rank) + " differs from symbolic rank " +
                           std::to_string(symbolic.rank));
  out.all_larger_minors_vanish = true;
  if (out.rank > 0) {
    auto piv = constant_pivots(forms::evaluate_matrix(m, best_point), num_params);
    out.rows = piv.pivot_rows;
    out.cols = piv.pivot_cols;
    std::sort(out.rows.begin(), out.rows.end());
    out.witness_minor = forms::symbolic_determinant(forms::poly_submatrix(m, out.rows, out.cols));
    if (out.witness_minor.is_zero()) throw SymbolicMismatch("witness minor expands to zero");
  }
  if (out.rank == d) {
    out.larger_minors_expanded = true;
  } else if (binomial(d, out.rank + 1) * binomial(d, out.rank + 1) <= kMinorExpansionCap) {
    auto sets = all_subsets(d, out.rank + 1);
    for (const auto& rows : sets)
      for (const auto& cols : sets)
        if (!forms::symbolic_determinant(forms::poly_submatrix(m, rows, cols)).is_zero())
          throw SymbolicMismatch("an order " + std::to_string(out.rank + 1) + " minor does not vanish");
    out.larger_minors_expanded = true;
  }
  return out;
}

FibrationData build_fibration(const IntPolynomial& cubic, const VariableSplit& split, std::uint64_t seed,
                              unsigned trials) {
  FibrationData fd;
  fd.n = cubic.num_vars();
  split.validate(fd.n);
  split.validate_for(cubic);
  fd.split = split;
  fd.cubic = cubic;
  fd.parts = decompose(cubic, split);
  if (!(fd.parts.reassemble(split, fd.n) == cubic)) throw std::logic_error("decomposition does not reassemble");
  const std::size_t d = split.x_indices.size(), h = split.y_indices.size();
  fd.hessian.assign(d, std::vector<IntPolynomial>(d, IntPolynomial(h)));
  for (std::size_t i = 0; i < h; ++i) {
    if (fd.parts.F[i].is_zero()) continue;
    auto hess = constant_hessian(fd.parts.F[i]);
    auto yi = IntPolynomial::variable(h, i);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        if (hess[a][b] != 0) fd.hessian[a][b] += yi * hess[a][b];
  }
  auto rank = fibration_rank(fd.hessian, h, seed, trials);
  fd.rank = rank.rank;
  fd.witness_rows = rank.rows;
  fd.witness_cols = rank.cols;
  fd.witness_minor = rank.witness_minor;
  fd.record = rank.record;
  fd.all_larger_minors_vanish = rank.all_larger_minors_vanish;
  fd.larger_minors_expanded = rank.larger_minors_expanded;
  return fd;
}

std::string to_string(BlockStatus s) {
  switch (s) {
    case BlockStatus::Certified: return "certified";
    case BlockStatus::PreconditionViolated: return "precondition-violated";
    default: return "unresolved";
  }
}

LinearBlock extract_linear_block(const FibrationData& fd, int coefficient_bound) {
  const std::size_t d = fd.fibre_dim(), h = fd.param_dim(), n = fd.n, r = fd.rank;
  LinearBlock out;
  out.change = LinearChange::identity(n);
  out.transformed = fd.cubic;
  if (r == d) {
    out.status = BlockStatus::Certified;
    out.detail = "full rank: no linear block";
    return out;
  }
  std::vector<IntMatrix> hess;
  for (const auto& f : fd.parts.F) hess.push_back(f.is_zero() ? IntMatrix(d, std::vector<Integer>(d, 0)) : constant_hessian(f));

  // Unit vectors first, then the whole box.
  std::vector<std::vector<Integer>> candidates;
  for (std::size_t i = 0; i < h; ++i) {
    std::vector<Integer> c(h, 0);
    c[i] = 1;
    candidates.push_back(c);
  }
  std::optional<std::vector<Integer>> chosen;
  IntMatrix combo;
  auto try_combo = [&](const std::vector<Integer>& c) {
    IntMatrix m(d, std::vector<Integer>(d, 0));
    for (std::size_t i = 0; i < h; ++i)
      if (c[i] != 0)
        for (std::size_t a = 0; a < d; ++a)
          for (std::size_t b = 0; b < d; ++b) m[a][b] += c[i] * hess[i][a][b];
    if (forms::integer_rank(m) != r) return false;
    chosen = c;
    combo = m;
    return true;
  };
  for (const auto& c : candidates)
    if (try_combo(c)) break;
  if (!chosen && r > 0) {
    std::vector<Integer> c(h, -coefficient_bound);
    while (true) {
      if (std::any_of(c.begin(), c.end(), [](const Integer& x) { return x != 0; }) && try_combo(c)) break;
      std::size_t i = 0;
      while (i < h && c[i] == coefficient_bound) c[i++] = -coefficient_bound;
      if (i == h) break;
      ++c[i];
    }
  }
  if (r == 0) {
    chosen = std::vector<Integer>(h, 0);
    combo.assign(d, std::vector<Integer>(d, 0));
  }
  if (!chosen) {
    out.detail = "no combination of the F_i with coefficients in [-" + std::to_string(coefficient_bound) + ", " +
                 std::to_string(coefficient_bound) + "] attains rank " + std::to_string(r);
    return out;
  }
  out.combination = *chosen;

  RationalMatrix q(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) q(a, b) = combo[a][b];
  auto diag = forms::diagonalize_congruence(q);
  Integer den = diag.transform.common_denominator();
  auto& m = out.change.matrix;
  out.change.denominator = den;
  for (std::size_t i = 0; i < n; ++i) std::fill(m[i].begin(), m[i].end(), Integer(0));
  for (auto y : fd.split.y_indices) m[y][y] = den;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      Rational e = diag.transform(a, b) * den;
      m[fd.split.x_indices[a]][fd.split.x_indices[b]] = e.get_num();
    }
  out.transformed = forms::substitute_linear(fd.cubic, out.change);

  for (std::size_t a = r; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      auto second = out.transformed.partial(fd.split.x_indices[a]).partial(fd.split.x_indices[b]);
      if (!second.is_zero()) {
        out.status = BlockStatus::PreconditionViolated;
        auto sr = forms::symbolic_rank(fd.hessian);
        out.detail = "second partial in fibre variables " + std::to_string(a) + ", " + std::to_string(b) +
                     " is nonzero; symbolic rank is " + std::to_string(sr.rank) + ", not " + std::to_string(r);
        if (sr.rank > r) {
          std::vector<std::size_t> rows(sr.pivot_rows.begin(), sr.pivot_rows.begin() + r + 1);
          std::vector<std::size_t> cols(sr.pivot_cols.begin(), sr.pivot_cols.begin() + r + 1);
          std::sort(rows.begin(), rows.end());
          auto minor = forms::symbolic_determinant(forms::poly_submatrix(fd.hessian, rows, cols));
          out.detail += "; nonzero order " + std::to_string(r + 1) + " minor " + minor.to_string();
        }
        return out;
      }
    }
  out.status = BlockStatus::Certified;
  for (std::size_t a = r; a < d; ++a) out.linear_vars.push_back(fd.split.x_indices[a]);
  out.detail = "second partials in the last " + std::to_string(d - r) + " fibre variables vanish";
  return out;
}

SemidefiniteProduct detect_semidefinite_product(const FibrationData& fd) {
  SemidefiniteProduct out;
  const std::size_t d = fd.fibre_dim(), h = fd.param_dim();
  std::optional<std::vector<Integer>> l;
  IntMatrix scale(d, std::vector<Integer>(d, 0));
  for (std::size_t a = 0; a < d && out.reason.empty(); ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const auto& e = fd.hessian[a][b];
      if (e.is_zero()) continue;
      std::vector<Integer> v(h, 0);
      for (std::size_t i = 0; i < h; ++i) {
        forms::Exponent ex(h, 0);
        ex[i] = 1;
        v[i] = e.coefficient(ex);
      }
      if (!l) {
        Integer g = 0;
        for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        auto first = std::find_if(v.begin(), v.end(), [](const Integer& x) { return x != 0; });
        if (*first < 0) g = -g;
        l = v;
        for (auto& x : *l) x /= g;
      }
      // e = lambda * l exactly, with lambda read off the first nonzero coordinate of l.
      std::size_t k = static_cast<std::size_t>(
          std::find_if(l->begin(), l->end(), [](const Integer& x) { return x != 0; }) - l->begin());
      Integer lambda = v[k] / (*l)[k];
      bool proportional = lambda * (*l)[k] == v[k];
      for (std::size_t i = 0; i < h && proportional; ++i) proportional = v[i] == lambda * (*l)[i];
      if (!proportional) {
        out.reason = "Hessian entries are not multiples of one linear form";
        break;
      }
      scale[a][b] = lambda;
    }
  if (!out.reason.empty()) return out;
  if (!l) {
    out.reason = "the quadratic part vanishes";
    return out;
  }
  out.l = IntPolynomial(h);
  for (std::size_t i = 0; i < h; ++i) {
    forms::Exponent ex(h, 0);
    ex[i] = 1;
    out.l.add_term(ex, (*l)[i]);
  }
  out.F = IntPolynomial(d);
  for (std::size_t a = 0; a < d; ++a) {
    forms::Exponent ex(d, 0);
    ex[a] = 2;
    if (scale[a][a] % 2 != 0) throw std::logic_error("odd diagonal Hessian entry");
    out.F.add_term(ex, scale[a][a] / 2);
    for (std::size_t b = a + 1; b < d; ++b) {
      forms::Exponent eab(d, 0);
      eab[a] = eab[b] = 1;
      out.F.add_term(eab, scale[a][b]);
    }
  }
  RationalMatrix nm(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) nm(a, b) = scale[a][b];
  out.inertia = forms::rank_signature_over_Q(nm);
  std::size_t support = 0;
  for (std::size_t a = 0; a < d; ++a)
    if (std::any_of(scale[a].begin(), scale[a].end(), [](const Integer& x) { return x != 0; })) ++support;
  out.definite_on_support = out.inertia.rank == support &&
                            (out.inertia.positive == 0 || out.inertia.negative == 0);
  out.certificate_verified =
      quadratic_part(fd) == out.l.embed(fd.n, fd.split.y_indices) * out.F.embed(fd.n, fd.split.x_indices);
  bool semidefinite = out.inertia.positive == 0 || out.inertia.negative == 0;
  if (!semidefinite) {
    out.reason = "Q_y = l(y) F(x) with F indefinite";
  } else if (out.inertia.rank != fd.rank) {
    out.reason = "rank of F differs from the fibration rank";
  } else {
    out.holds = out.certificate_verified;
    out.reason = out.holds ? "Q_y = l(y) F(x) with F semidefinite" : "factorization identity failed";
  }
  return out;
}

std::optional<forms::Inertia> check_indefinite_point(const FibrationData& fd, const std::vector<Integer>& u) {
  if (u.size() != fd.param_dim()) throw forms::DimensionError("point has the wrong number of coordinates");
  if (fd.witness_minor.evaluate(u) == 0) return std::nullopt;
  auto m = forms::evaluate_matrix(fd.hessian, u);
  RationalMatrix q(m.size(), m.size());
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b) q(a, b) = m[a][b];
  auto in = forms::rank_signature_over_Q(q);
  if (in.rank != fd.rank || in.positive == 0 || in.negative == 0) return std::nullopt;
  return in;
}

IndefiniteWitness indefinite_witness(const FibrationData& fd, std::uint64_t seed, std::uint64_t budget) {
  if (fd.rank == 0) throw std::domain_error("indefinite witness needs a positive fibration rank");
  if (detect_semidefinite_product(fd).holds) throw std::domain_error("Q_y = l(y) F(x) with F semidefinite has no indefinite point");
  const std::size_t h = fd.param_dim();
  std::optional<std::vector<Integer>> found;
  std::optional<forms::Inertia> inertia;
  std::uint64_t tried = 0;
  // Small points by increasing sup norm, then random points.
  for (long radius = 1; radius <= 2 && !found; ++radius) {
    std::vector<Integer> u(h, -radius);
    while (!found) {
      bool on_shell = std::any_of(u.begin(), u.end(), [&](const Integer& x) { return abs(x) == radius; });
      if (on_shell && ++tried <= budget && (inertia = check_indefinite_point(fd, u))) found = u;
      std::size_t i = 0;
      while (i < h && u[i] == radius) u[i++] = -radius;
      if (i == h) break;
      ++u[i];
    }
  }
  std::mt19937_64 rng(seed);
  while (!found && tried < budget) {
    ++tried;
    auto u = random_point(rng, h, 50);
    if ((inertia = check_indefinite_point(fd, u))) found = u;
  }
  if (!found) throw forms::BudgetExceeded("no indefinite point found within the search budget");
  IndefiniteWitness out;
  out.point = *found;
  out.inertia = *inertia;
  out.minor_value = fd.witness_minor.evaluate(out.point);
  const int sign = sgn(out.minor_value);
  Rational radius(1, 2);
  for (int halving = 0; halving < 40; ++halving, radius /= 2) {
    bool ok = true;
    for (std::uint64_t mask = 0; mask < (1ull << h) && ok; ++mask) {
      std::vector<Rational> corner(h);
      for (std::size_t i = 0; i < h; ++i) corner[i] = Rational(out.point[i]) + ((mask >> i) & 1 ? radius : -radius);
      if (sgn(fd.witness_minor.evaluate(std::span<const Rational>(corner))) != sign) {
        ok = false;
        break;
      }
      RationalMatrix q(fd.fibre_dim(), fd.fibre_dim());
      for (std::size_t a = 0; a < fd.fibre_dim(); ++a)
        for (std::size_t b = 0; b < fd.fibre_dim(); ++b)
          q(a, b) = fd.hessian[a][b].evaluate(std::span<const Rational>(corner));
      auto in = forms::rank_signature_over_Q(q);
      ok = in.positive > 0 && in.negative > 0;
    }
    if (ok) {
      out.box_radius = radius;
      return out;
    }
  }
  out.box_radius = 0;
  return out;
}

}  // namespace cubicfib::fibration
