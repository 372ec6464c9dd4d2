#pragma once

#include <cstdint>
#include <vector>

#include "murmur/arith.hpp"
#include "murmur/classnum.hpp"

namespace murmur {

// Range of the r-sum in the closed-form density. FullSupport keeps every r
// with 4y - r^2 > 0 (the natural support of the square root); PaperLiteral
// stops at r <= sqrt(y).
enum class RSumMode { PaperLiteral, FullSupport };

struct DensityConfig {
  EulerConfig euler;
  RSumMode mode = RSumMode::FullSupport;
};

const char* rsum_mode_name(RSumMode mode);

// norm * (A sqrt(y) + B sum_r C(r) sqrt(4y - r^2) - pi y) with
// norm = 12 / (pi prod_p (1 - 1/(p(p+1)))).
double predicted_density(double y, const DensityConfig& cfg = {});

struct Window {
  uint64_t X = 0;
  uint64_t Y = 0;
  double delta = 0.0;
  double delta2 = 0.0;
};

// Y = round(X^(1-delta)); delta2 is carried as metadata for prime choice.
Window make_window(uint64_t X, double delta, double delta2);

struct MurmurationPoint {
  uint64_t X = 0, Y = 0, P = 0;
  double y = 0.0;
  double empirical = 0.0;
  double predicted = 0.0;
  double residual = 0.0;
  uint64_t excluded_levels = 0;  // squarefree levels dropped because P | N
};

// Exact windowed average of the trace identity at P^2 against the newform
// count, over squarefree levels in [X, X+Y] coprime to P. The numerator
// and denominator are exact; division happens once at the end.
MurmurationPoint empirical_average(const Window& window, uint64_t P, const DensityConfig& cfg,
                                   ClassNumberCache& cache, int threads = 0,
                                   bool asymptotic_norm = false);

// Nearest odd prime to x; ties resolved downward.
uint64_t nearest_odd_prime(double x);

struct SweepConfig {
  DensityConfig density;
  double delta = 0.25;
  double delta2 = 0.1;
  int threads = 0;
  bool asymptotic_norm = false;
};

// One point per (X, y) grid cell, X-major then y; P is the nearest odd
// prime to sqrt(y X).
std::vector<MurmurationPoint> sweep(const std::vector<uint64_t>& xs, const std::vector<double>& ys,
                                    const SweepConfig& cfg, ClassNumberCache& cache);

struct MainTermCheck {
  double lhs = 0.0;
  double main = 0.0;
  // per-class-number split: h(-P^2 N), h(-N), h(-4P^2 N), h(-4N)
  double sub_lhs[4] = {0, 0, 0, 0};
  double sub_main[4] = {0, 0, 0, 0};
};

// zeta(2) pi / (XY) * sum of the four half class numbers vs A P / sqrt(X).
MainTermCheck prop31_check(const Window& window, uint64_t P, ClassNumberCache& cache,
                           const EulerConfig& euler = {}, int threads = 0);

// Window sum of H1(r^2 N^2 - 4 P^2 N) vs its B C(r) main term.
MainTermCheck prop51_check(const Window& window, uint64_t P, uint64_t r, ClassNumberCache& cache,
                           const EulerConfig& euler = {}, int threads = 0);

// CSV row format shared by the CLI and the sweep tools: header plus one
// line per point, reals at 12 significant digits.
std::string csv_header();
std::string csv_row(const MurmurationPoint& pt, RSumMode mode);

}  // namespace murmur
