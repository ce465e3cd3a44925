#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cubicfib/ff/arith.hpp"
#include "cubicfib/forms/quadratic.hpp"

namespace cubicfib::ff {

using forms::IntPolynomial;
using forms::QuadraticPolynomial;

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

using ModVector = std::vector<std::int64_t>;
using ModMatrix = std::vector<ModVector>;

// R^T Q R = diag(D) mod p with the nonzero entries of D first.
struct ModDiagonalization {
  ModMatrix R;
  ModVector D;
  std::size_t rank = 0;
};

ModDiagonalization diagonalize_mod_p(const forms::RationalMatrix& q, std::int64_t p);

// epsilon_p is 1 for p = 1 mod 4 and i for p = 3 mod 4.
enum class EpsilonTag { One, I };

// Ingredients of the Gauss-sum evaluation of a quadric count mod p.
struct GaussSumData {
  std::int64_t p = 0;
  std::size_t m = 0;
  std::size_t rank = 0;
  EpsilonTag epsilon = EpsilonTag::One;
  // Legendre symbol of the product of the nonzero diagonal entries.
  int legendre_det = 1;
  // 4N - B^T M^{-1} B on the nondegenerate block, reduced mod p.
  std::int64_t w = 0;
  bool kappa = false;
  // Even rank: K_r is the integer k_even. Odd rank: K_r = epsilon * k_odd_sign * sqrt(p).
  Integer k_even = 0;
  int k_odd_sign = 0;
  // Some linear coefficient outside the nondegenerate block is a unit.
  bool linear_escape = false;
};

struct QuadricCount {
  Integer total;
  Integer nonsingular;
  GaussSumData data;
  // Singular points lying on F = 0: base + span(directions), present iff data.kappa.
  ModVector singular_base;
  ModMatrix singular_directions;
};

// Closed-form count of F = 0 over F_p for an odd prime p.
QuadricCount count_quadric_mod_p_closed_form(const QuadraticPolynomial& f, std::int64_t p);

// p^{m-1} + eps^r (det/p) p^{m-r/2-1} K_r evaluated with symbolic powers of epsilon.
Integer assemble_total(const GaussSumData& data);

struct ModCount {
  Integer total;
  // Zeros with gradient nonzero modulo the least prime dividing q.
  Integer nonsingular;
};

ModCount count_mod_q_bruteforce(const IntPolynomial& f, std::int64_t q, std::uint64_t budget = kDefaultBudget);

// Exact N(p^t) by lifting nonsingular roots and recursing at singular ones.
Integer count_mod_prime_power(const IntPolynomial& f, std::int64_t p, unsigned t,
                              std::uint64_t budget = kDefaultBudget);

enum class CountMode { Exact, Certified };

struct HenselCount {
  Integer value;
  bool exact = false;
  // Certified mode: level v of the witness set and its size mod p^{2v-1}.
  unsigned v = 0;
  Integer witnesses = 0;
};

HenselCount hensel_count(const IntPolynomial& f, std::int64_t p, unsigned t, CountMode mode,
                         std::uint64_t budget = kDefaultBudget, unsigned v_max = 4);

// Point mod p^{2v-1} with f = 0 there and some listed partial nonzero mod p^v.
struct PadicWitness {
  std::int64_t p = 0;
  unsigned v = 0;
  std::int64_t modulus = 0;
  ModVector residue;
};

std::optional<PadicWitness> find_padic_nonsingular(const IntPolynomial& f, std::span<const std::size_t> grad_vars,
                                                   std::int64_t p, unsigned v_max,
                                                   std::uint64_t budget = kDefaultBudget);

// Number of witnesses mod p^{2v-1} for the partials in grad_vars.
Integer count_witnesses(const IntPolynomial& f, std::span<const std::size_t> grad_vars, std::int64_t p, unsigned v,
                        std::uint64_t budget = kDefaultBudget);

struct ResidueValueCount {
  Integer residues;     // f(x) a nonzero square mod p
  Integer nonresidues;  // f(x) a non-square mod p
  Integer zeros;
  Integer character_sum;  // sum of the Legendre symbol of f(x)
};

ResidueValueCount quadratic_residue_value_count(const IntPolynomial& f, std::int64_t p,
                                                std::uint64_t budget = kDefaultBudget);

// Calls visit(x) for every x in (Z/q)^m in lexicographic order; checks the budget first.
template <class Visit>
void for_each_residue(std::size_t m, std::int64_t q, std::uint64_t budget, Visit&& visit);

}  // namespace cubicfib::ff

#include "cubicfib/ff/counting_impl.hpp"
