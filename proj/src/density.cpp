#include "murmur/density.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "murmur/trace.hpp"

namespace murmur {

namespace {

struct DensityConstants {
  double A, B, norm;
};

DensityConstants density_constants(const EulerConfig& euler) {
  static std::mutex mu;
  static std::map<uint64_t, DensityConstants> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto it = memo.find(euler.prime_bound);
  if (it != memo.end()) return it->second;
  DensityConstants c{constant_A(euler).value, constant_B(euler).value, norm_constant(euler).value};
  memo.emplace(euler.prime_bound, c);
  return c;
}

// Deterministic chunked parallel map: results are combined in chunk order.
template <typename R, typename Fn>
std::vector<R> parallel_chunks(uint64_t lo, uint64_t hi, int threads, Fn fn) {
  uint64_t n = hi - lo + 1;
  if (threads <= 0) threads = default_threads();
  uint64_t nchunks = std::min<uint64_t>(std::max<uint64_t>(1, (uint64_t)threads * 8), n);
  uint64_t chunk = (n + nchunks - 1) / nchunks;
  nchunks = (n + chunk - 1) / chunk;
  std::vector<R> results(nchunks);
  std::atomic<uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      uint64_t i = next.fetch_add(1);
      if (i >= nchunks) return;
      uint64_t clo = lo + i * chunk;
      uint64_t chi = std::min(hi, clo + chunk - 1);
      results[i] = fn(clo, chi);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

constexpr double kZeta2 = M_PI * M_PI / 6.0;

}  // namespace

const char* rsum_mode_name(RSumMode mode) {
  return mode == RSumMode::FullSupport ? "full" : "paper";
}

double predicted_density(double y, const DensityConfig& cfg) {
  if (y <= 0) throw std::invalid_argument("predicted_density: y > 0");
  DensityConstants c = density_constants(cfg.euler);
  double rsum = 0.0;
  for (uint64_t r = 1;; ++r) {
    double rr = (double)r * (double)r;
    bool in = cfg.mode == RSumMode::FullSupport ? rr < 4 * y : rr <= y;
    if (!in) break;
    rsum += constant_C(r) * std::sqrt(4 * y - rr);
  }
  return c.norm * (c.A * std::sqrt(y) + c.B * rsum - M_PI * y);
}

Window make_window(uint64_t X, double delta, double delta2) {
  if (X < 2) throw std::invalid_argument("make_window: X >= 2");
  Window w;
  w.X = X;
  w.Y = (uint64_t)std::llround(std::pow((double)X, 1.0 - delta));
  w.delta = delta;
  w.delta2 = delta2;
  if (w.Y < 1 || w.Y >= X) throw std::invalid_argument("make_window: need 0 < Y < X");
  return w;
}

uint64_t nearest_odd_prime(double x) {
  long long c = std::llround(x);
  if (c < 3) c = 3;
  for (long long delta = 0;; ++delta) {
    long long down = c - delta;
    if (down >= 3 && down % 2 == 1 && (double)down <= x + 0.5 && is_prime_u64((uint64_t)down)) {
      // prefer the closer candidate; on a tie, the smaller one
      long long up = c + delta;
      if (std::abs((double)down - x) <= std::abs((double)up - x) || !(up % 2 == 1 && is_prime_u64((uint64_t)up)))
        return (uint64_t)down;
    }
    long long up = c + delta;
    if (up % 2 == 1 && is_prime_u64((uint64_t)up)) {
      if (down < 3 || std::abs((double)up - x) <= std::abs((double)down - x) || !(down % 2 == 1 && is_prime_u64((uint64_t)down)))
        return (uint64_t)up;
    }
    if (delta > 2000) throw std::runtime_error("nearest_odd_prime: no prime found near x");
  }
}

MurmurationPoint empirical_average(const Window& window, uint64_t P, const DensityConfig& cfg,
                                   ClassNumberCache& cache, int threads, bool asymptotic_norm) {
  if (P < 3 || !is_prime_u64(P)) throw std::invalid_argument("empirical_average: P must be an odd prime");
  const uint64_t X = window.X, Y = window.Y;
  SquarefreeSieve sf = sieve_squarefree(X, X + Y);
  struct Part {
    Rational num{0};
    unsigned long long den = 0;
    uint64_t excluded = 0;
  };
  auto parts = parallel_chunks<Part>(X, X + Y, threads, [&](uint64_t lo, uint64_t hi) {
    Part part;
    for (uint64_t N = lo; N <= hi; ++N) {
      if (!sf.is_squarefree(N)) continue;
      if (N % P == 0) {
        ++part.excluded;
        continue;
      }
      if (N == 1) continue;  // empty new space, contributes nothing
      part.num += trace_rhs({N, P, 2}, cache);
      part.den += dim_s2_new(N);
    }
    return part;
  });
  Rational num(0);
  unsigned long long den = 0;
  uint64_t excluded = 0;
  for (const Part& p : parts) {
    num += p.num;
    den += p.den;
    excluded += p.excluded;
  }
  MurmurationPoint pt;
  pt.X = X;
  pt.Y = Y;
  pt.P = P;
  pt.y = (double)P * (double)P / (double)X;
  double denom;
  if (asymptotic_norm) {
    denom = (double)X * (double)Y / (12.0 * kZeta2) * level_density_product(cfg.euler).value;
  } else {
    if (den == 0) throw std::runtime_error("empirical_average: window contains no newforms");
    denom = (double)den;
  }
  pt.empirical = num.get_d() / denom;
  pt.predicted = predicted_density(pt.y, cfg);
  pt.residual = pt.empirical - pt.predicted;
  pt.excluded_levels = excluded;
  return pt;
}

std::vector<MurmurationPoint> sweep(const std::vector<uint64_t>& xs, const std::vector<double>& ys,
                                    const SweepConfig& cfg, ClassNumberCache& cache) {
  std::vector<MurmurationPoint> out;
  for (uint64_t X : xs) {
    Window w = make_window(X, cfg.delta, cfg.delta2);
    for (double y : ys) {
      uint64_t P = nearest_odd_prime(std::sqrt(y * (double)X));
      out.push_back(empirical_average(w, P, cfg.density, cache, cfg.threads, cfg.asymptotic_norm));
    }
  }
  return out;
}

MainTermCheck prop31_check(const Window& window, uint64_t P, ClassNumberCache& cache,
                           const EulerConfig& euler, int threads) {
  if (P < 3 || !is_prime_u64(P)) throw std::invalid_argument("prop31_check: P must be an odd prime");
  const uint64_t X = window.X, Y = window.Y;
  SquarefreeSieve sf = sieve_squarefree(X, X + Y);
  using Sums = std::array<unsigned long long, 4>;
  auto parts = parallel_chunks<Sums>(X, X + Y, threads, [&](uint64_t lo, uint64_t hi) {
    Sums s{0, 0, 0, 0};
    for (uint64_t N = lo; N <= hi; ++N) {
      if (!sf.is_squarefree(N) || N % P == 0) continue;
      if (N % 4 == 3) {
        s[0] += cache.h(P * P * N);
        s[1] += cache.h(N);
      }
      s[2] += cache.h(4 * P * P * N);
      s[3] += cache.h(4 * N);
    }
    return s;
  });
  Sums total{0, 0, 0, 0};
  for (auto& s : parts)
    for (int i = 0; i < 4; ++i) total[i] += s[i];
  double A = density_constants(euler).A;
  double scale = kZeta2 * M_PI / ((double)X * (double)Y);
  MainTermCheck out;
  double sqX = std::sqrt((double)X);
  double main4[4] = {2 * A * (double)P / (11 * sqX), 2 * A / (11 * sqX),
                     9 * A * (double)P / (11 * sqX), 9 * A / (22 * sqX)};
  for (int i = 0; i < 4; ++i) {
    out.sub_lhs[i] = scale * (double)total[i] / 2.0;
    out.sub_main[i] = main4[i];
    out.lhs += out.sub_lhs[i];
  }
  out.main = A * (double)P / sqX;
  return out;
}

MainTermCheck prop51_check(const Window& window, uint64_t P, uint64_t r, ClassNumberCache& cache,
                           const EulerConfig& euler, int threads) {
  if (P < 3 || !is_prime_u64(P)) throw std::invalid_argument("prop51_check: P must be an odd prime");
  const uint64_t X = window.X, Y = window.Y;
  if ((unsigned __int128)r * r * (X + Y) >= (unsigned __int128)4 * P * P)
    throw std::invalid_argument("prop51_check: need 4P^2 > r^2 (X+Y)");
  SquarefreeSieve sf = sieve_squarefree(X, X + Y);
  auto parts = parallel_chunks<Rational>(X, X + Y, threads, [&](uint64_t lo, uint64_t hi) {
    Rational s(0);
    for (uint64_t N = lo; N <= hi; ++N) {
      if (!sf.is_squarefree(N) || N % P == 0) continue;
      s += cache.H1(N * (4 * P * P - r * r * N));
    }
    return s;
  });
  Rational lhs(0);
  for (auto& s : parts) lhs += s;
  MainTermCheck out;
  out.lhs = lhs.get_d();
  double Bc = density_constants(euler).B * constant_C(r);
  double Xd = (double)X;
  out.main = (double)Y * std::sqrt(4.0 * P * P * Xd - (double)(r * r) * Xd * Xd) / (kZeta2 * M_PI) * Bc;
  return out;
}

std::string csv_header() { return "X,Y,P,y,mode,empirical,predicted,residual,excluded_levels\n"; }

std::string csv_row(const MurmurationPoint& pt, RSumMode mode) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%.12g,%s,%.12g,%.12g,%.12g,%llu\n",
                (unsigned long long)pt.X, (unsigned long long)pt.Y, (unsigned long long)pt.P, pt.y,
                rsum_mode_name(mode), pt.empirical, pt.predicted, pt.residual,
                (unsigned long long)pt.excluded_levels);
  return buf;
}

}  // namespace murmur
