#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cubicfib/forms/polynomial.hpp"

namespace cubicfib::ff {

using forms::Integer;
using forms::Rational;

// Jacobi symbol (a/n) for odd positive n.
int jacobi_symbol(const Integer& a, const Integer& n);

// Legendre symbol for an odd prime p, a reduced or not.
int legendre(std::int64_t a, std::int64_t p);

std::int64_t mod_reduce(std::int64_t a, std::int64_t m);
std::int64_t mod_mul(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t mod_pow(std::int64_t a, std::uint64_t e, std::int64_t m);
// Inverse of a modulo m; throws if gcd(a, m) != 1.
std::int64_t mod_inverse(std::int64_t a, std::int64_t m);
// a mod m for a rational with denominator prime to m.
std::int64_t rational_mod(const Rational& a, std::int64_t m);

bool is_prime(std::uint64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t n);

// Trial-division factorization; throws BudgetExceeded if a cofactor above max_trial^2 remains unproven.
std::vector<std::pair<Integer, unsigned>> factorize(Integer n, std::uint64_t max_trial = 10'000'000);

// Positive divisors of n != 0, increasing.
std::vector<Integer> divisors(const Integer& n);
int mobius(const Integer& n);

Integer ipow(const Integer& base, unsigned long e);
unsigned long p_adic_valuation(const Integer& n, std::int64_t p);  // n != 0

// Least prime factor of q >= 2.
std::int64_t least_prime_factor(std::int64_t q);

// Prime power decomposition q = p^t; returns {0, 0} if q is not a prime power.
std::pair<std::int64_t, unsigned> as_prime_power(std::int64_t q);

}  // namespace cubicfib::ff
