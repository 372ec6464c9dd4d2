#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace murmur {

// Exact rational numbers, always kept in lowest terms with positive
// denominator (GMP canonical form).
using Rational = mpq_class;

// Kronecker symbol (a|n), extended to every integer n (including n <= 0).
// Total function: never throws.
int kronecker(long long a, long long n) noexcept;

uint64_t isqrt_u64(uint64_t n) noexcept;
uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) noexcept;
uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) noexcept;

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(uint64_t n) noexcept;

// Shared prime table, grown on demand. The returned vector contains all
// primes <= limit (and possibly more); safe to use from any thread.
std::shared_ptr<const std::vector<uint32_t>> primes_up_to(uint64_t limit);

// Square root of n modulo an odd prime p, if one exists.
bool sqrt_mod_prime(uint64_t n, uint64_t p, uint64_t& root) noexcept;

using Factorization = std::vector<std::pair<uint64_t, int>>;
Factorization factorize(uint64_t n);
uint64_t euler_phi(uint64_t n);
std::vector<uint64_t> divisors(uint64_t n);

struct SquarefreeSieve {
  uint64_t lo = 0;
  uint64_t hi = 0;
  std::vector<bool> flags;  // flags[n - lo] == (mu(n)^2 == 1)

  bool is_squarefree(uint64_t n) const { return flags[n - lo]; }
  uint64_t count() const;
};

// Flags the squarefree integers in [lo, hi], both ends included.
SquarefreeSieve sieve_squarefree(uint64_t lo, uint64_t hi);

// Test-friendly reference: mu(n)^2 by trial factorization.
bool is_squarefree_slow(uint64_t n);

// eta(m) = prod_{p | m} p/(p+1).
Rational eta(uint64_t m);

struct EulerConfig {
  uint64_t prime_bound = 1000000;  // truncate products over p <= prime_bound
};

// A truncated Euler product together with a certified bound on the
// distance |value - full product|. Bounds come from log(1+x) <= x plus
// sum_{n>B} n^-k <= B^(1-k)/(k-1); no unproved constants.
struct EulerValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

// A = prod_p (1 + p / ((p+1)^2 (p-1))). Increasing in the prime bound.
EulerValue constant_A(const EulerConfig& cfg = {});
// B = prod_p (p^4 - 2p^2 - p + 1) / (p^2 - 1)^2. Decreasing in the bound.
EulerValue constant_B(const EulerConfig& cfg = {});
// C(r) = prod_{p | r} (1 + p^2 / (p^4 - 2p^2 - p + 1)); finite, exact up to
// floating-point rounding.
double constant_C(uint64_t r);
// prod_p (1 - 1/(p(p+1))), the squarefree-level density factor.
EulerValue level_density_product(const EulerConfig& cfg = {});
// 12 / (pi * prod_p (1 - 1/(p(p+1)))).
EulerValue norm_constant(const EulerConfig& cfg = {});

// Partial sums of eta against 1/m^2 over various supports, all converging
// to simple multiples of A.
enum class EtaSumKind {
  All,            // sum_{m<=K} eta(m)/m^2            -> A
  Odd,            // sum over odd m                   -> (9/11) A
  TwoM,           // sum_{m<=K} eta(2m)/m^2           -> (8/11) A
  CoprimeTwoP,    // odd m coprime to P               -> (9/11) A + O(P^-2)
  TwoMCoprimeP,   // eta(2m), m coprime to P          -> (8/11) A + O(P^-2)
};
double eta_partial_sum(EtaSumKind kind, uint64_t K, uint64_t P = 997);

int default_threads();

}  // namespace murmur
