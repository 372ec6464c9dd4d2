#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "murmur/arith.hpp"

namespace murmur {

// A reduced positive-definite integral binary quadratic form a x^2 + b xy +
// c y^2 of discriminant b^2 - 4ac = -d, primitive, with |b| <= a <= c and
// b >= 0 whenever |b| = a or a = c.
struct ReducedForm {
  int64_t a = 0;
  int64_t b = 0;
  int64_t c = 0;
  bool operator==(const ReducedForm&) const = default;
};

// d > 0 and d = 0 or 3 (mod 4), i.e. -d is a form discriminant.
bool valid_discriminant(uint64_t d);

// One representative per class of primitive forms of discriminant -d.
// Loops b <= sqrt(d/3) with b = d (mod 2) and factors (b^2 + d)/4 = a*c.
std::vector<ReducedForm> reduced_forms(uint64_t d);

// Gauss class number h(-d) = |reduced_forms(d)| for d = 0,3 (mod 4), and 0
// for d = 1,2 (mod 4). Large d is handled by factoring the whole sequence
// (b^2 + d)/4 with one sieve pass over b (roots of b^2 = -d mod p).
uint64_t gauss_h(uint64_t d);

// Reference count over all (a, b, c) boxes with no reduction shortcuts;
// O(d) per call, intended for cross-checks.
uint64_t gauss_h_bruteforce(uint64_t d);

// Hurwitz class number H_1(-d) = sum over f^2 | d with d/f^2 = 0,3 (mod 4)
// of h(-d/f^2), except the classes of discriminant -3 and -4 count 1/3 and
// 1/2. Throws on d = 1,2 (mod 4).
Rational hurwitz_H1(uint64_t d);

// (sqrt(d)/pi) * sum_{n<=T} (-d|n)/n, the truncated Dirichlet-series
// approximation to h(-d) via the class number formula. Exact in the limit
// when the fundamental part of -d is not -3 or -4 (those carry extra units).
double approx_h_via_L(uint64_t d, uint64_t T);

// Memoizing store for (h, 6*H_1) keyed by d, with an optional on-disk
// backing file: one "d h sixH1" record per line, plus a checksum footer.
class ClassNumberCache {
 public:
  ClassNumberCache() = default;
  explicit ClassNumberCache(std::string path) : path_(std::move(path)) {}

  uint64_t h(uint64_t d);
  Rational H1(uint64_t d);

  size_t size() const;
  const std::string& path() const { return path_; }

  // Loads records from the backing file. Verifies the checksum footer and
  // recomputes a few sampled entries. Throws on any mismatch.
  void load();
  void save() const;

 private:
  struct Entry {
    uint64_t h;
    int64_t six_h1;  // -1 when d is not a form discriminant
  };
  Entry get(uint64_t d);

  mutable std::mutex mu_;
  std::unordered_map<uint64_t, Entry> map_;
  std::string path_;
};

}  // namespace murmur
