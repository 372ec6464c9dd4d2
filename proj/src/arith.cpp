#include "murmur/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

namespace murmur {

int kronecker(long long a, long long n) noexcept {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int sign = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) sign = -sign;
  }
  // (a|2) = 0, 1, -1 for a even, a = +-1 (8), a = +-3 (8).
  if ((n & 1) == 0) {
    if ((a & 1) == 0) return 0;
    int twos = 0;
    while ((n & 1) == 0) {
      n >>= 1;
      ++twos;
    }
    if (twos & 1) {
      long long r = ((a % 8) + 8) % 8;
      if (r == 3 || r == 5) sign = -sign;
    }
  }
  if (n == 1) return sign;
  // (.|n) for odd n > 0 is periodic mod n, so reducing a is safe.
  long long am = a % n;
  if (am < 0) am += n;
  unsigned long long aa = (unsigned long long)am;
  unsigned long long nn = (unsigned long long)n;
  // Binary Jacobi on (aa | nn), nn odd positive.
  while (aa != 0) {
    while ((aa & 1) == 0) {
      aa >>= 1;
      unsigned long long r = nn & 7;
      if (r == 3 || r == 5) sign = -sign;
    }
    std::swap(aa, nn);
    if ((aa & 3) == 3 && (nn & 3) == 3) sign = -sign;
    aa %= nn;
  }
  return nn == 1 ? sign : 0;
}

uint64_t isqrt_u64(uint64_t n) noexcept {
  if (n == 0) return 0;
  uint64_t r = (uint64_t)std::sqrt((double)n);
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) noexcept {
  return (uint64_t)((unsigned __int128)a * b % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) noexcept {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime_u64(uint64_t n) noexcept {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < s - 1; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

std::mutex g_prime_mutex;
std::shared_ptr<const std::vector<uint32_t>> g_primes;
uint64_t g_prime_limit = 0;

std::shared_ptr<const std::vector<uint32_t>> sieve_primes(uint64_t limit) {
  std::vector<bool> comp(limit + 1, false);
  auto out = std::make_shared<std::vector<uint32_t>>();
  for (uint64_t i = 2; i <= limit; ++i) {
    if (!comp[i]) {
      out->push_back((uint32_t)i);
      for (uint64_t j = i * i; j <= limit; j += i) comp[j] = true;
    }
  }
  return out;
}

}  // namespace

std::shared_ptr<const std::vector<uint32_t>> primes_up_to(uint64_t limit) {
  std::lock_guard<std::mutex> lock(g_prime_mutex);
  if (limit > g_prime_limit) {
    uint64_t target = std::max<uint64_t>(limit + limit / 4, 1 << 16);
    g_primes = sieve_primes(target);
    g_prime_limit = target;
  }
  return g_primes;
}

bool sqrt_mod_prime(uint64_t n, uint64_t p, uint64_t& root) noexcept {
  n %= p;
  if (n == 0) {
    root = 0;
    return true;
  }
  if (p == 2) {
    root = n;
    return true;
  }
  if (p % 4 == 3) {
    uint64_t r = powmod_u64(n, (p + 1) / 4, p);
    if (mulmod_u64(r, r, p) != n) return false;
    root = r;
    return true;
  }
  if (powmod_u64(n, (p - 1) / 2, p) != 1) return false;
  // Tonelli-Shanks
  uint64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  uint64_t z = 2;
  while (powmod_u64(z, (p - 1) / 2, p) != p - 1) ++z;
  uint64_t m = s;
  uint64_t c = powmod_u64(z, q, p);
  uint64_t t = powmod_u64(n, q, p);
  uint64_t r = powmod_u64(n, (q + 1) / 2, p);
  while (t != 1) {
    uint64_t i = 0, t2 = t;
    while (t2 != 1) {
      t2 = mulmod_u64(t2, t2, p);
      ++i;
      if (i == m) return false;
    }
    uint64_t b = powmod_u64(c, 1ull << (m - i - 1), p);
    m = i;
    c = mulmod_u64(b, b, p);
    t = mulmod_u64(t, c, p);
    r = mulmod_u64(r, b, p);
  }
  root = r;
  return true;
}

Factorization factorize(uint64_t n) {
  Factorization out;
  if (n <= 1) return out;
  uint64_t s = isqrt_u64(n);
  auto primes = primes_up_to(s);
  for (uint32_t p : *primes) {
    if ((uint64_t)p > n / p) break;
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(p, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

uint64_t euler_phi(uint64_t n) {
  uint64_t r = n;
  for (auto [p, e] : factorize(n)) {
    (void)e;
    r -= r / p;
  }
  return n == 0 ? 0 : r;
}

std::vector<uint64_t> divisors(uint64_t n) {
  std::vector<uint64_t> divs{1};
  for (auto [p, e] : factorize(n)) {
    size_t sz = divs.size();
    uint64_t pe = 1;
    for (int i = 0; i < e; ++i) {
      pe *= p;
      for (size_t j = 0; j < sz; ++j) divs.push_back(divs[j] * pe);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

uint64_t SquarefreeSieve::count() const {
  uint64_t c = 0;
  for (bool f : flags) c += f;
  return c;
}

SquarefreeSieve sieve_squarefree(uint64_t lo, uint64_t hi) {
  if (lo < 1 || lo > hi) throw std::invalid_argument("sieve_squarefree: need 1 <= lo <= hi");
  SquarefreeSieve s;
  s.lo = lo;
  s.hi = hi;
  s.flags.assign(hi - lo + 1, true);
  auto primes = primes_up_to(isqrt_u64(hi));
  for (uint32_t p : *primes) {
    uint64_t p2 = (uint64_t)p * p;
    if (p2 > hi) break;
    uint64_t start = ((lo + p2 - 1) / p2) * p2;
    for (uint64_t j = start; j <= hi; j += p2) s.flags[j - lo] = false;
  }
  return s;
}

bool is_squarefree_slow(uint64_t n) {
  if (n == 0) return false;
  for (uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return false;
    }
  }
  return true;
}

Rational eta(uint64_t m) {
  if (m < 1) throw std::invalid_argument("eta: m must be positive");
  Rational r(1);
  for (auto [p, e] : factorize(m)) {
    (void)e;
    r *= Rational((long)p, (long)(p + 1));
  }
  r.canonicalize();
  return r;
}

namespace {

// True value lies between value and value * exp(log_tail) (increasing
// products) or value * exp(-log_tail) (decreasing ones); either way the
// distance is at most value * expm1(log_tail).
double abs_tail(double value, double log_tail) {
  return value * std::expm1(log_tail) * (1.0 + 1e-12) + 1e-300;
}

}  // namespace

EulerValue constant_A(const EulerConfig& cfg) {
  auto primes = primes_up_to(cfg.prime_bound);
  double v = 1.0;
  for (uint32_t p : *primes) {
    if (p > cfg.prime_bound) break;
    double pd = (double)p;
    v *= 1.0 + pd / ((pd + 1) * (pd + 1) * (pd - 1));
  }
  // log factor <= p/((p+1)^2(p-1)) <= 1/p^2, and sum_{n>B} 1/n^2 <= 1/B.
  return {v, abs_tail(v, 1.0 / (double)cfg.prime_bound)};
}

EulerValue constant_B(const EulerConfig& cfg) {
  auto primes = primes_up_to(cfg.prime_bound);
  double v = 1.0;
  for (uint32_t p : *primes) {
    if (p > cfg.prime_bound) break;
    double pd = (double)p;
    double den = (pd * pd - 1) * (pd * pd - 1);
    v *= (pd * pd * pd * pd - 2 * pd * pd - pd + 1) / den;
  }
  // -log(1-x) <= 2x for x <= 1/2; x_p = p/(p^2-1)^2 <= 2/p^3, and
  // sum_{n>B} 1/n^3 <= 1/(2B^2).
  double B = (double)cfg.prime_bound;
  return {v, abs_tail(v, 2.0 / (B * B))};
}

double constant_C(uint64_t r) {
  double v = 1.0;
  for (auto [p, e] : factorize(r)) {
    (void)e;
    double pd = (double)p;
    v *= 1.0 + pd * pd / (pd * pd * pd * pd - 2 * pd * pd - pd + 1);
  }
  return v;
}

EulerValue level_density_product(const EulerConfig& cfg) {
  auto primes = primes_up_to(cfg.prime_bound);
  double v = 1.0;
  for (uint32_t p : *primes) {
    if (p > cfg.prime_bound) break;
    double pd = (double)p;
    v *= 1.0 - 1.0 / (pd * (pd + 1));
  }
  // -log(1-x) <= 2x with x = 1/(p(p+1)) < 1/p^2.
  return {v, abs_tail(v, 2.0 / (double)cfg.prime_bound)};
}

EulerValue norm_constant(const EulerConfig& cfg) {
  EulerValue d = level_density_product(cfg);
  double v = 12.0 / (M_PI * d.value);
  // |1/d - 1/d_full| <= tail / (d * (d - tail)).
  double tail = v * d.tail_bound / (d.value - d.tail_bound);
  return {v, tail * (1.0 + 1e-12)};
}

double eta_partial_sum(EtaSumKind kind, uint64_t K, uint64_t P) {
  if (K < 1) throw std::invalid_argument("eta_partial_sum: K >= 1");
  bool two_m = (kind == EtaSumKind::TwoM || kind == EtaSumKind::TwoMCoprimeP);
  uint64_t top = two_m ? 2 * K : K;
  // smallest prime factors, for incremental eta values
  std::vector<uint32_t> spf(top + 1, 0);
  for (uint64_t i = 2; i <= top; ++i) {
    if (spf[i] == 0) {
      for (uint64_t j = i; j <= top; j += i)
        if (spf[j] == 0) spf[j] = (uint32_t)i;
    }
  }
  std::vector<double> etav(top + 1, 1.0);
  for (uint64_t i = 2; i <= top; ++i) {
    uint64_t p = spf[i];
    uint64_t q = i;
    while (q % p == 0) q /= p;
    etav[i] = etav[q] * ((double)p / (double)(p + 1));
  }
  double sum = 0.0;
  for (uint64_t m = K; m >= 1; --m) {  // small terms first
    switch (kind) {
      case EtaSumKind::All:
        break;
      case EtaSumKind::Odd:
        if (m % 2 == 0) continue;
        break;
      case EtaSumKind::TwoM:
        break;
      case EtaSumKind::CoprimeTwoP:
        if (m % 2 == 0 || m % P == 0) continue;
        break;
      case EtaSumKind::TwoMCoprimeP:
        if (m % P == 0) continue;
        break;
    }
    double e = two_m ? etav[2 * m] : etav[m];
    sum += e / ((double)m * (double)m);
  }
  return sum;
}

int default_threads() {
  if (const char* env = std::getenv("MURMUR_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? (int)hc : 1;
}

}  // namespace murmur
