#include "cubicfib/ff/arith.hpp"

#include <algorithm>
#include <stdexcept>

namespace cubicfib::ff {

int jacobi_symbol(const Integer& a_in, const Integer& n_in) {
  if (n_in <= 0 || mpz_even_p(n_in.get_mpz_t())) throw std::domain_error("Jacobi symbol needs an odd positive modulus");
  Integer n = n_in;
  Integer a = a_in % n;
  if (a < 0) a += n;
  int result = 1;
  while (a != 0) {
    while (mpz_even_p(a.get_mpz_t())) {
      a /= 2;
      unsigned long r = mpz_fdiv_ui(n.get_mpz_t(), 8);
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (mpz_fdiv_ui(a.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(n.get_mpz_t(), 4) == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

std::int64_t mod_reduce(std::int64_t a, std::int64_t m) {
  a %= m;
  return a < 0 ? a + m : a;
}

std::int64_t mod_mul(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

std::int64_t mod_pow(std::int64_t a, std::uint64_t e, std::int64_t m) {
  std::int64_t r = 1 % m, b = mod_reduce(a, m);
  while (e) {
    if (e & 1) r = mod_mul(r, b, m);
    b = mod_mul(b, b, m);
    e >>= 1;
  }
  return r;
}

int legendre(std::int64_t a, std::int64_t p) {
  a = mod_reduce(a, p);
  if (a == 0) return 0;
  return mod_pow(a, static_cast<std::uint64_t>((p - 1) / 2), p) == 1 ? 1 : -1;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, r = mod_reduce(a, m);
  while (r) {
    std::int64_t q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw std::domain_error("element is not invertible");
  return mod_reduce(x, m);
}

std::int64_t rational_mod(const Rational& a, std::int64_t m) {
  auto num = static_cast<std::int64_t>(mpz_fdiv_ui(a.get_num_mpz_t(), static_cast<unsigned long>(m)));
  auto den = static_cast<std::int64_t>(mpz_fdiv_ui(a.get_den_mpz_t(), static_cast<unsigned long>(m)));
  return mod_mul(num, mod_inverse(den, m), m);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while (!(d & 1)) {
    d >>= 1;
    ++s;
  }
  auto mulmod = [n](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
  };
  // Deterministic witness set for 64-bit inputs.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = 1, b = a % n, e = d;
    while (e) {
      if (e & 1) x = mulmod(x, b);
      b = mulmod(b, b);
      e >>= 1;
    }
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  std::vector<bool> sieve(static_cast<std::size_t>(n + 1), true);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) sieve[j] = false;
  }
  return out;
}

std::vector<std::pair<Integer, unsigned>> factorize(Integer n, std::uint64_t max_trial) {
  std::vector<std::pair<Integer, unsigned>> out;
  n = abs(n);
  if (n == 0) throw std::domain_error("cannot factor zero");
  for (std::uint64_t p = 2; p <= max_trial; p += (p == 2 ? 1 : 2)) {
    if (Integer(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p) > n) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      unsigned k = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        n /= static_cast<unsigned long>(p);
        ++k;
      }
      out.emplace_back(Integer(static_cast<unsigned long>(p)), k);
    }
  }
  if (n > 1) {
    Integer bound = Integer(static_cast<unsigned long>(max_trial)) * static_cast<unsigned long>(max_trial);
    if (n > bound && mpz_probab_prime_p(n.get_mpz_t(), 40) == 0)
      throw forms::BudgetExceeded("factorization exceeds the trial-division budget");
    out.emplace_back(n, 1);
  }
  return out;
}

Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

unsigned long p_adic_valuation(const Integer& n, std::int64_t p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  Integer m = n;
  unsigned long v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    m /= static_cast<unsigned long>(p);
    ++v;
  }
  return v;
}

std::int64_t least_prime_factor(std::int64_t q) {
  if (q < 2) throw std::domain_error("modulus must be at least 2");
  for (std::int64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) return d;
  return q;
}

std::pair<std::int64_t, unsigned> as_prime_power(std::int64_t q) {
  std::int64_t p = least_prime_factor(q);
  unsigned t = 0;
  while (q % p == 0) {
    q /= p;
    ++t;
  }
  if (q != 1) return {0, 0};
  return {p, t};
}

}  // namespace cubicfib::ff

namespace cubicfib::ff {

std::vector<Integer> divisors(const Integer& n) {
  if (n == 0) throw std::domain_error("divisors of zero");
  std::vector<Integer> out{1};
  for (const auto& [p, e] : factorize(abs(n))) {
    const std::size_t size = out.size();
    Integer pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < size; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int mobius(const Integer& n) {
  int mu = 1;
  for (const auto& [p, e] : factorize(abs(n))) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

}  // namespace cubicfib::ff
