#pragma once

#include <cstdint>
#include <vector>

#include "murmur/arith.hpp"

namespace murmur {

// The set of residues a mod d^2 whose squarefree lifts N (coprime to P)
// satisfy d^2 | r^2 N - 4P^2 and (r^2 N^2 - 4P^2 N)/d^2 = 0 or 1 (mod 4).
struct ResidueSet {
  uint64_t r = 0, d = 0, P = 0;
  std::vector<uint64_t> residues;  // sorted, mod d^2

  bool contains(uint64_t n_mod_d2) const;
  bool admissible() const { return !residues.empty(); }
};

// Case analysis by parity of r and d and by gcd(r, d).
ResidueSet residue_set(uint64_t r, uint64_t d, uint64_t P);
// Oracle: scans every class mod 4d^2 and tests the defining congruences
// directly (with a squarefree-lift existence check); no case analysis.
ResidueSet residue_set_bruteforce(uint64_t r, uint64_t d, uint64_t P);
// Expected |residue_set| from the four-branch cardinality table.
int residue_table_cardinality(uint64_t r, uint64_t d);

// theta_r(m) = sum_{a mod m} (a|m) ((a r^2 - 4P^2)|m).
int64_t theta_r_bruteforce(uint64_t m, uint64_t r, uint64_t P);
// Multiplicative closed form by prime-power table; requires gcd(m, P) = 1.
int64_t theta_r_closed(uint64_t m, uint64_t r, uint64_t P);

// phi~_{r,d}(g) = sum over a mod d^2 g with a mod d^2 in the residue set of
// (a|g) (((a r^2 - 4P^2)/d^2)|g). Requires rad(g) | d for the closed form.
int64_t phi_tilde_bruteforce(uint64_t r, uint64_t d, uint64_t g, uint64_t P);
int64_t phi_tilde_closed(uint64_t r, uint64_t d, uint64_t g, uint64_t P);

// Checks sum_{b mod f d^2 n, b in R mod d^2} (b|n)(((r^2 b - 4P^2)/d^2)|n)
// = f phi~_{r,d}(g) theta_r(n/g) with g the d-supported part of n and
// f = 4 for even n, else 1. Both sides evaluated by direct summation.
bool lemma54_factorization_check(uint64_t r, uint64_t d, uint64_t n, uint64_t P);

// S_{n,d,r} over the window [X, X+Y]: the exact character sum over
// squarefree levels in the residue set, coprime to P. Requires
// 4P^2 > r^2 (X+Y).
int64_t s_ndr(uint64_t n, uint64_t d, uint64_t r, uint64_t P, uint64_t X, uint64_t Y);
// Same value accumulated residue-class-major instead of level-major.
int64_t s_ndr_class_major(uint64_t n, uint64_t d, uint64_t r, uint64_t P, uint64_t X, uint64_t Y);

}  // namespace murmur
