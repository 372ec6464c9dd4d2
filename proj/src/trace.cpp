#include "murmur/trace.hpp"

#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace murmur {

void validate(const TraceParams& params) {
  if (params.N < 2) throw std::invalid_argument("trace: N >= 2 required (level 1 is degenerate)");
  if (!is_squarefree_slow(params.N)) throw std::invalid_argument("trace: N must be squarefree");
  if (params.P < 3 || !is_prime_u64(params.P)) throw std::invalid_argument("trace: P must be an odd prime");
  if (params.N % params.P == 0) throw std::invalid_argument("trace: P must not divide N");
  if (params.k < 1) throw std::invalid_argument("trace: k >= 1");
}

namespace {

uint64_t pow_u64(uint64_t b, int e) {
  uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

Rational trace_rhs(const TraceParams& params, ClassNumberCache& cache) {
  validate(params);
  const uint64_t N = params.N, P = params.P;
  const uint64_t Pk = pow_u64(P, params.k);
  Rational sum = cache.H1(4 * Pk * N) / 2;
  // r^2 N < 4 P^k strictly: every summand is a genuine negative discriminant
  uint64_t rmax = isqrt_u64((4 * Pk - 1) / N);
  for (uint64_t r = 1; r <= rmax; ++r) sum += cache.H1(N * (4 * Pk - r * r * N));
  Rational sigma(0);
  uint64_t pi = 1;
  for (int i = 0; i <= params.k; ++i) {
    sigma += (long)pi;
    pi *= P;
  }
  sum -= sigma;
  sum.canonicalize();
  return sum;
}

Rational hurwitz_decomposition_rhs(uint64_t N, uint64_t P, int k, ClassNumberCache& cache) {
  // Square divisors of 4 P^k N are 4^a P^(2j) with 2j <= k (N squarefree,
  // coprime to 2P is not assumed; the quotient classes with residue 1,2
  // mod 4 vanish via the h convention).
  Rational sum(0);
  int jmax = k / 2;
  for (int j = 0; j <= jmax; ++j) {
    sum += (long)cache.h(4 * pow_u64(P, k - 2 * j) * N);
    sum += (long)cache.h(pow_u64(P, k - 2 * j) * N);
  }
  sum.canonicalize();
  return sum;
}

namespace {

// Genus of X_0(N) from the index, elliptic point and cusp counts.
struct GenusData {
  uint64_t mu = 1, nu2 = 1, nu3 = 1, nuinf = 0;
};

GenusData genus_data(uint64_t N) {
  GenusData g;
  auto facs = factorize(N);
  for (auto [p, e] : facs) {
    uint64_t pe = pow_u64(p, e);
    g.mu *= pe + pe / p;
  }
  if (N % 4 == 0)
    g.nu2 = 0;
  else
    for (auto [p, e] : facs) {
      (void)e;
      g.nu2 *= p == 2 ? 1 : (uint64_t)(1 + kronecker(-1, (long long)p));
    }
  if (N % 9 == 0)
    g.nu3 = 0;
  else
    for (auto [p, e] : facs) {
      (void)e;
      g.nu3 *= p == 3 ? 1 : (uint64_t)(1 + kronecker(-3, (long long)p));
    }
  for (uint64_t d : divisors(N)) g.nuinf += euler_phi(std::gcd(d, N / d));
  return g;
}

}  // namespace

uint64_t dim_s2(uint64_t M) {
  if (M < 1) throw std::invalid_argument("dim_s2: M >= 1");
  GenusData g = genus_data(M);
  int64_t twelve_g = 12 + (int64_t)g.mu - 3 * (int64_t)g.nu2 - 4 * (int64_t)g.nu3 - 6 * (int64_t)g.nuinf;
  if (twelve_g % 12 != 0 || twelve_g < 0) throw std::logic_error("dim_s2: genus formula not integral");
  return (uint64_t)(twelve_g / 12);
}

uint64_t dim_s2_new(uint64_t N) {
  // dim S_2(Gamma_0(N)) = sum_{M | N} sigma_0(N/M) dim_new(M); invert with
  // the multiplicative inverse of sigma_0: beta(p) = -2, beta(p^2) = 1.
  int64_t total = 0;
  for (uint64_t M : divisors(N)) {
    uint64_t q = N / M;
    int64_t beta = 1;
    for (auto [p, e] : factorize(q)) {
      (void)p;
      if (e == 1)
        beta *= -2;
      else if (e == 2)
        beta *= 1;
      else
        beta = 0;
    }
    if (beta) total += beta * (int64_t)dim_s2(M);
  }
  if (total < 0) throw std::logic_error("dim_s2_new: negative dimension");
  return (uint64_t)total;
}

int64_t CurveModel::discriminant() const {
  int64_t b2 = a1 * a1 + 4 * a2;
  int64_t b4 = 2 * a4 + a1 * a3;
  int64_t b6 = a3 * a3 + 4 * a6;
  int64_t b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
}

const std::vector<CurveModel>& builtin_curves() {
  static const std::vector<CurveModel> curves = {
      {"11a1", 11, 0, -1, 1, -10, -20},
      {"14a1", 14, 1, 0, 1, 4, -6},
      {"15a1", 15, 1, 1, 1, -10, -10},
      {"17a1", 17, 1, -1, 1, -1, -14},
      {"19a1", 19, 0, 1, 1, -9, -15},
      {"21a1", 21, 1, 0, 0, -4, -1},
  };
  return curves;
}

std::vector<CurveModel> load_curves(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open curve table: " + path);
  std::vector<CurveModel> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    CurveModel c;
    if (!(ls >> c.label >> c.level >> c.a1 >> c.a2 >> c.a3 >> c.a4 >> c.a6))
      throw std::runtime_error("bad curve record: " + line);
    out.push_back(c);
  }
  return out;
}

int64_t count_points_ap(const CurveModel& curve, uint64_t P) {
  if (P < 3 || !is_prime_u64(P)) throw std::invalid_argument("count_points: P must be an odd prime");
  int64_t disc = curve.discriminant();
  if (disc == 0 || (uint64_t)std::llabs(disc) % P == 0)
    throw std::invalid_argument("count_points: bad reduction at P");
  // Complete the square: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
  auto red = [&](int64_t v) { return (uint64_t)(((v % (int64_t)P) + (int64_t)P) % (int64_t)P); };
  uint64_t c3 = 4 % P;
  uint64_t c2 = red(curve.a1 * curve.a1 + 4 * curve.a2);
  uint64_t c1 = red(2 * (2 * curve.a4 + curve.a1 * curve.a3));
  uint64_t c0 = red(curve.a3 * curve.a3 + 4 * curve.a6);
  int64_t sum = 0;
  for (uint64_t x = 0; x < P; ++x) {
    uint64_t fx = (mulmod_u64(mulmod_u64(mulmod_u64(c3, x, P) + c2, x, P) + c1, x, P) + c0) % P;
    sum += kronecker((long long)fx, (long long)P);
  }
  return -sum;
}

int epsilon_consistency(const CurveModel& curve, const std::vector<uint64_t>& primes,
                        ClassNumberCache& cache) {
  if (!is_squarefree_slow(curve.level) || dim_s2_new(curve.level) != 1)
    throw std::invalid_argument("epsilon_consistency: level must be squarefree with a 1-dimensional new space");
  int sign = 0;
  for (uint64_t P : primes) {
    if (P < 3 || curve.level % P == 0) continue;
    int64_t aP = count_points_ap(curve, P);
    int64_t den = aP * aP - (int64_t)P;
    if (den == 0) continue;  // impossible for prime P, kept for totality
    Rational tr = trace_rhs({curve.level, P, 2}, cache);
    if (tr.get_den() != 1) throw std::logic_error("epsilon_consistency: non-integral trace");
    int64_t num = tr.get_num().get_si();
    if (num % den != 0) throw std::logic_error("epsilon_consistency: ratio not integral");
    int64_t q = num / den;
    if (q != 1 && q != -1) throw std::logic_error("epsilon_consistency: ratio outside {-1,+1}");
    if (sign == 0)
      sign = (int)q;
    else if (sign != (int)q)
      throw std::logic_error("epsilon_consistency: inconsistent signs across primes");
  }
  if (sign == 0) throw std::invalid_argument("epsilon_consistency: no admissible prime");
  return sign;
}

}  // namespace murmur
