#include "cubicfib/forms/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace cubicfib::forms {

unsigned exponent_degree(const Exponent& e) {
  return std::accumulate(e.begin(), e.end(), 0u);
}

bool GrlexGreater::operator()(const Exponent& a, const Exponent& b) const {
  unsigned da = exponent_degree(a), db = exponent_degree(b);
  if (da != db) return da > db;
  return a > b;
}

IntPolynomial IntPolynomial::constant(std::size_t num_vars, const Integer& c) {
  IntPolynomial p(num_vars);
  p.add_term(Exponent(num_vars, 0), c);
  return p;
}

IntPolynomial IntPolynomial::variable(std::size_t num_vars, std::size_t index) {
  if (index >= num_vars) throw DimensionError("variable index out of range");
  Exponent e(num_vars, 0);
  e[index] = 1;
  IntPolynomial p(num_vars);
  p.add_term(e, 1);
  return p;
}

IntPolynomial IntPolynomial::monomial(Exponent e, const Integer& c) {
  IntPolynomial p(e.size());
  p.add_term(e, c);
  return p;
}

int IntPolynomial::total_degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(exponent_degree(terms_.begin()->first));
}

bool IntPolynomial::is_homogeneous() const {
  if (terms_.empty()) return true;
  unsigned d = exponent_degree(terms_.begin()->first);
  for (const auto& [e, c] : terms_)
    if (exponent_degree(e) != d) return false;
  return true;
}

Integer IntPolynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Integer(0) : it->second;
}

Integer IntPolynomial::content() const {
  Integer g = 0;
  for (const auto& [e, c] : terms_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

void IntPolynomial::add_term(const Exponent& e, const Integer& c) {
  if (e.size() != num_vars_) throw DimensionError("exponent length does not match variable count");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void IntPolynomial::check_compatible(const IntPolynomial& o) const {
  if (o.num_vars_ != num_vars_) throw DimensionError("polynomials live in different rings");
}

IntPolynomial& IntPolynomial::operator+=(const IntPolynomial& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

IntPolynomial& IntPolynomial::operator-=(const IntPolynomial& o) {
  check_compatible(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
  a.check_compatible(b);
  IntPolynomial r(a.num_vars_);
  Exponent e(a.num_vars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

IntPolynomial& IntPolynomial::operator*=(const IntPolynomial& o) {
  *this = *this * o;
  return *this;
}

IntPolynomial& IntPolynomial::operator*=(const Integer& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

IntPolynomial IntPolynomial::operator-() const {
  IntPolynomial r = *this;
  for (auto& [e, v] : r.terms_) v = -v;
  return r;
}

bool IntPolynomial::operator==(const IntPolynomial& o) const {
  return num_vars_ == o.num_vars_ && terms_ == o.terms_;
}

IntPolynomial IntPolynomial::pow(unsigned k) const {
  IntPolynomial result = constant(num_vars_, 1);
  IntPolynomial base = *this;
  while (k) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

template <class T>
static T evaluate_impl(const IntPolynomial::TermMap& terms, std::size_t n, std::span<const T> point) {
  if (point.size() != n) throw DimensionError("point has wrong dimension");
  T total = 0;
  for (const auto& [e, c] : terms) {
    T term = c;
    for (std::size_t i = 0; i < n; ++i)
      for (unsigned k = 0; k < e[i]; ++k) term *= point[i];
    total += term;
  }
  return total;
}

Integer IntPolynomial::evaluate(std::span<const Integer> point) const {
  return evaluate_impl<Integer>(terms_, num_vars_, point);
}

Rational IntPolynomial::evaluate(std::span<const Rational> point) const {
  return evaluate_impl<Rational>(terms_, num_vars_, point);
}

IntPolynomial IntPolynomial::partial(std::size_t var) const {
  if (var >= num_vars_) throw DimensionError("variable index out of range");
  IntPolynomial r(num_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent d = e;
    d[var] -= 1;
    r.add_term(d, c * e[var]);
  }
  return r;
}

std::vector<IntPolynomial> IntPolynomial::gradient() const {
  std::vector<IntPolynomial> g;
  g.reserve(num_vars_);
  for (std::size_t i = 0; i < num_vars_; ++i) g.push_back(partial(i));
  return g;
}

IntPolynomial IntPolynomial::compose(std::span<const IntPolynomial> images) const {
  if (images.size() != num_vars_) throw DimensionError("need one image per variable");
  std::size_t m = images.empty() ? 0 : images[0].num_vars();
  for (const auto& g : images)
    if (g.num_vars() != m) throw DimensionError("images live in different rings");
  // Cache powers per variable to avoid recomputation across terms.
  std::vector<std::vector<IntPolynomial>> powers(num_vars_);
  IntPolynomial result(m);
  for (const auto& [e, c] : terms_) {
    IntPolynomial term = constant(m, c);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (e[i] == 0) continue;
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(constant(m, 1));
      while (pw.size() <= e[i]) pw.push_back(pw.back() * images[i]);
      term *= pw[e[i]];
    }
    result += term;
  }
  return result;
}

IntPolynomial IntPolynomial::specialize(std::span<const std::size_t> vars,
                                        std::span<const Integer> values) const {
  if (vars.size() != values.size()) throw DimensionError("vars/values length mismatch");
  std::vector<IntPolynomial> images;
  images.reserve(num_vars_);
  for (std::size_t i = 0; i < num_vars_; ++i) images.push_back(variable(num_vars_, i));
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (vars[k] >= num_vars_) throw DimensionError("variable index out of range");
    images[vars[k]] = constant(num_vars_, values[k]);
  }
  return compose(images);
}

IntPolynomial IntPolynomial::embed(std::size_t new_num_vars, std::span<const std::size_t> map) const {
  if (map.size() != num_vars_) throw DimensionError("embedding map has wrong length");
  IntPolynomial r(new_num_vars);
  for (const auto& [e, c] : terms_) {
    Exponent d(new_num_vars, 0);
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (map[i] >= new_num_vars) throw DimensionError("embedding target out of range");
      d[map[i]] += e[i];
    }
    r.add_term(d, c);
  }
  return r;
}

IntPolynomial IntPolynomial::homogeneous_part(unsigned degree) const {
  IntPolynomial r(num_vars_);
  for (const auto& [e, c] : terms_)
    if (exponent_degree(e) == degree) r.terms_.emplace(e, c);
  return r;
}

unsigned IntPolynomial::degree_in(std::span<const std::size_t> vars) const {
  unsigned best = 0;
  for (const auto& [e, c] : terms_) {
    unsigned d = 0;
    for (auto v : vars) d += e.at(v);
    best = std::max(best, d);
  }
  return best;
}

std::string IntPolynomial::to_text() const {
  std::ostringstream out;
  for (const auto& [e, c] : terms_) {
    out << c.get_str();
    for (auto k : e) out << ' ' << k;
    out << '\n';
  }
  return out.str();
}

IntPolynomial IntPolynomial::from_text(std::size_t num_vars, const std::string& text) {
  IntPolynomial p(num_vars);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string coef;
    ls >> coef;
    Integer c;
    if (c.set_str(coef, 10) != 0)
      throw ParseError("line " + std::to_string(line_no) + ": bad coefficient '" + coef + "'");
    Exponent e;
    long k;
    while (ls >> k) {
      if (k < 0) throw ParseError("line " + std::to_string(line_no) + ": negative exponent");
      e.push_back(static_cast<unsigned>(k));
    }
    if (!ls.eof()) throw ParseError("line " + std::to_string(line_no) + ": bad exponent");
    if (e.size() != num_vars)
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(num_vars) +
                       " exponents");
    p.add_term(e, c);
  }
  return p;
}

std::string IntPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Integer a = abs(c);
    out << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    bool unit = true;
    for (auto k : e) unit = unit && k == 0;
    if (a != 1 || unit) out << a.get_str();
    bool need_star = a != 1;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      out << (need_star ? "*" : "") << 'x' << (i + 1);
      if (e[i] > 1) out << '^' << e[i];
      need_star = true;
    }
    first = false;
  }
  return out.str();
}

std::optional<IntPolynomial> exact_divide(const IntPolynomial& a, const IntPolynomial& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (a.num_vars() != b.num_vars()) throw DimensionError("polynomials live in different rings");
  const std::size_t n = a.num_vars();
  const auto& [lb_exp, lb_coef] = *b.terms().begin();
  IntPolynomial rem = a;
  IntPolynomial quot(n);
  while (!rem.is_zero()) {
    const auto [lr_exp, lr_coef] = *rem.terms().begin();
    Exponent q(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (lr_exp[i] < lb_exp[i]) return std::nullopt;
      q[i] = lr_exp[i] - lb_exp[i];
    }
    if (!mpz_divisible_p(lr_coef.get_mpz_t(), lb_coef.get_mpz_t())) return std::nullopt;
    Integer qc = lr_coef / lb_coef;
    IntPolynomial step = IntPolynomial::monomial(q, qc);
    quot += step;
    rem -= step * b;
  }
  return quot;
}

CompiledPolynomial::CompiledPolynomial(const IntPolynomial& p) : num_vars_(p.num_vars()) {
  for (const auto& [e, c] : p.terms()) {
    big_coeffs_.push_back(c);
    exps_.push_back(e);
    degree_ = std::max(degree_, exponent_degree(e));
    l1_ += std::abs(c.get_d());
    if (!mpz_fits_slong_p(c.get_mpz_t())) fits_ = false;
    coeffs_.push_back(fits_ ? static_cast<__int128>(c.get_si()) : 0);
  }
}

std::int64_t CompiledPolynomial::eval_mod(const std::int64_t* x, std::int64_t q) const {
  using u128 = unsigned __int128;
  __int128 total = 0;
  for (std::size_t t = 0; t < exps_.size(); ++t) {
    __int128 term;
    if (fits_) {
      term = coeffs_[t] % q;
    } else {
      term = static_cast<__int128>(mpz_fdiv_ui(big_coeffs_[t].get_mpz_t(), static_cast<unsigned long>(q)));
    }
    if (term < 0) term += q;
    const auto& e = exps_[t];
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (!e[i]) continue;
      __int128 xi = x[i] % q;
      if (xi < 0) xi += q;
      for (unsigned k = 0; k < e[i]; ++k) term = static_cast<__int128>(static_cast<u128>(term) * static_cast<u128>(xi) % static_cast<u128>(q));
    }
    total += term;
    if (total >= q) total -= q;
  }
  return static_cast<std::int64_t>(total);
}

__int128 CompiledPolynomial::eval_exact(const std::int64_t* x) const {
  __int128 total = 0;
  for (std::size_t t = 0; t < exps_.size(); ++t) {
    __int128 term = coeffs_[t];
    const auto& e = exps_[t];
    for (std::size_t i = 0; i < num_vars_; ++i)
      for (unsigned k = 0; k < e[i]; ++k) term *= x[i];
    total += term;
  }
  return total;
}

Integer CompiledPolynomial::eval_big(const std::int64_t* x) const {
  Integer total = 0;
  for (std::size_t t = 0; t < exps_.size(); ++t) {
    Integer term = big_coeffs_[t];
    const auto& e = exps_[t];
    for (std::size_t i = 0; i < num_vars_; ++i)
      for (unsigned k = 0; k < e[i]; ++k) term *= static_cast<long>(x[i]);
    total += term;
  }
  return total;
}

}  // namespace cubicfib::forms
