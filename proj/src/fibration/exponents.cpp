#include <algorithm>
#include <cmath>

#include "cubicfib/fibration/fibration.hpp"

namespace cubicfib::fibration {

namespace {

Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational min_of(std::initializer_list<Rational> xs) { return *std::min_element(xs.begin(), xs.end()); }

// Three primes from a descending list whose projective parameter spaces stay enumerable.
std::vector<std::int64_t> probe_primes_for(std::size_t h) {
  std::vector<std::int64_t> out;
  for (std::int64_t p : {401, 211, 101, 53, 31, 17, 11, 7, 5, 3}) {
    if (std::pow(double(p), double(h) - 1) <= 2e5) out.push_back(p);
    if (out.size() == 3) break;
  }
  return out;
}

}  // namespace

ExponentPrediction predicted_exponents(long n, long h, long r, const Rational& eps, ShapeTag shape) {
  if (h < 1 || n <= h || r < 0 || r > n - h)
    throw std::domain_error("predicted_exponents needs n > h >= 1 and 0 <= r <= n - h");
  ExponentPrediction p;
  p.n = n;
  p.h = h;
  p.r = r;
  p.eps = eps;
  const long m = n - h;
  p.gamma = min_of({q(h - 5, 2), q(r - n + 3 * h - 8, 3)});
  if (r % 2 == 0 && 2 * r - m < 8)
    p.delta = q(2 * (r - 4) * (h - 1), r + 2 * m) - 2 - eps;
  else
    p.delta = q(2 * (r - 3) * (h - 1), r + 2 * m + 1) - 2 - eps;
  if (3 * m - 3 != 0) {
    p.beta = q(2 * (h - 1) * (m - 7), 3 * m - 3) - 2 - eps;
    p.alpha = min_of({q(h - 5, 2), q(2 * h - 12, 3), p.beta});
  } else {
    p.warnings.push_back("beta undefined for n - h = 1");
    p.alpha = min_of({q(h - 5, 2), q(2 * h - 12, 3)});
  }
  p.rank_exponent = q(r - 2) + q(2 * (n - r - 1), 3);
  p.split_exponent = q(m - 2) + q(h - 1, 2);

  switch (shape) {
    case ShapeTag::LinearBlock:
      p.bound = "linear-fibre-bound";
      p.exponent = q(n - 3) - eps;
      if (m - r < 5) p.warnings.push_back("fewer than 5 linear fibre variables");
      if (h < 8) p.warnings.push_back("h < 8");
      break;
    case ShapeTag::SemidefiniteProduct:
      p.bound = "semidefinite-product-bound";
      p.exponent = q(m) + p.gamma;
      if (r < 5) p.warnings.push_back("r < 5");
      break;
    case ShapeTag::IndefiniteBundle:
      p.bound = "indefinite-bundle-bound";
      p.exponent = q(m) + p.delta;
      if (h < 6) p.warnings.push_back("h < 6");
      if (r < std::min(5L, m - 4)) p.warnings.push_back("r < min(5, n - h - 4)");
      break;
    case ShapeTag::Auto:
      p.bound = "general-lower-bound";
      p.exponent = q(m) + p.alpha;
      if (h < 8) p.warnings.push_back("h < 8");
      if (n < h + 17) p.warnings.push_back("n < h + 17");
      break;
  }
  return p;
}

ShapeClassification classify_shape(const FibrationData& fd, std::uint64_t seed) {
  ShapeClassification out;
  out.product = detect_semidefinite_product(fd);
  out.linear_block_size = fd.fibre_dim() - fd.rank;
  bool has_q = std::any_of(fd.parts.q.begin(), fd.parts.q.end(), [](const IntPolynomial& p) { return !p.is_zero(); });
  if (has_q) {
    out.common_factor_Qi = common_linear_factor(fd.parts.q);
    out.rank2 = classify_rank2_bundle(bundle_of(fd));
  }
  if (fd.rank >= 3 && fd.fibre_dim() <= 12) out.minor_factor = order3_minor_common_factor(fd, seed, probe_primes_for(fd.param_dim()));
  return out;
}

}  // namespace cubicfib::fibration
