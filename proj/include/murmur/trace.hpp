#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "murmur/arith.hpp"
#include "murmur/classnum.hpp"

namespace murmur {

struct TraceParams {
  uint64_t N = 0;  // squarefree level, N >= 2
  uint64_t P = 0;  // odd prime, P coprime to N
  int k = 2;       // prime-power exponent
};

// Throws std::invalid_argument when the parameters are outside the domain
// of the trace identity (N not squarefree, N < 2, P not an odd prime,
// P | N, k < 1).
void validate(const TraceParams& params);

// Right-hand side of the trace identity for -T_{P^k} composed with the
// Fricke involution on the weight-2 new space:
//   H1(-4 P^k N)/2 + sum_{0 < r, r^2 N < 4 P^k} H1(r^2 N^2 - 4 P^k N)
//   - sum_{i=0}^{k} P^i.
// Exact rational; an integer whenever k = 2.
Rational trace_rhs(const TraceParams& params, ClassNumberCache& cache);

// The h-sum expansion of H1(-4 P^k N) by square divisors (separate even/odd
// k shapes); used to cross-check the Hurwitz evaluation.
Rational hurwitz_decomposition_rhs(uint64_t N, uint64_t P, int k, ClassNumberCache& cache);

// dim S_2(Gamma_0(M)) = genus of X_0(M).
uint64_t dim_s2(uint64_t M);
// Dimension of the weight-2 new subspace at level N (Moebius-type
// inversion of dim S_2 over divisors).
uint64_t dim_s2_new(uint64_t N);

// Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
struct CurveModel {
  std::string label;
  uint64_t level = 0;
  int64_t a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
  int64_t discriminant() const;
};

// Minimal models for the squarefree levels with a one-dimensional new
// space (Cremona labels 11a1, 14a1, 15a1, 17a1, 19a1, 21a1).
const std::vector<CurveModel>& builtin_curves();
// One curve per line: "label level a1 a2 a3 a4 a6".
std::vector<CurveModel> load_curves(const std::string& path);

// a_P = P + 1 - #E(F_P) by direct point counting; throws on bad reduction.
int64_t count_points_ap(const CurveModel& curve, uint64_t P);

// For a dimension-one level, trace_rhs(N, P, 2) / (a_P^2 - P) must be the
// same sign in {-1, +1} for every admissible prime; returns that sign and
// throws if the ratios are inconsistent or never defined.
int epsilon_consistency(const CurveModel& curve, const std::vector<uint64_t>& primes,
                        ClassNumberCache& cache);

}  // namespace murmur
