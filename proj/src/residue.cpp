#include "murmur/residue.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace murmur {

namespace {

uint64_t modinv(uint64_t a, uint64_t m) {
  int64_t t = 0, newt = 1;
  int64_t r = (int64_t)m, newr = (int64_t)(a % m);
  while (newr != 0) {
    int64_t q = r / newr;
    std::swap(t -= q * newt, newt);
    std::swap(r -= q * newr, newr);
  }
  if (r != 1) throw std::invalid_argument("modinv: not invertible");
  return (uint64_t)(t < 0 ? t + (int64_t)m : t);
}

void check_residue_args(uint64_t r, uint64_t d, uint64_t P) {
  if (r < 1 || d < 1) throw std::invalid_argument("residue_set: r, d >= 1");
  if (P < 3 || !is_prime_u64(P)) throw std::invalid_argument("residue_set: P must be an odd prime");
  if (d % P == 0 || r % P == 0) throw std::invalid_argument("residue_set: gcd(P, rd) must be 1");
}

}  // namespace

bool ResidueSet::contains(uint64_t n_mod_d2) const {
  return std::binary_search(residues.begin(), residues.end(), n_mod_d2);
}

int residue_table_cardinality(uint64_t r, uint64_t d) {
  uint64_t g = std::gcd(r, d);
  if (g == 1 && d % 2 == 1) return 1;      // any r, d odd
  if (r % 2 == 0 && g == 1) return 1;      // forces d odd as well
  if (g == 2 && d % 4 != 0) return 1;
  if (r % 2 == 0 && g == 2 && d % 4 == 0) return 2;
  return 0;
}

ResidueSet residue_set(uint64_t r, uint64_t d, uint64_t P) {
  check_residue_args(r, d, P);
  ResidueSet out{r, d, P, {}};
  uint64_t m = d * d;
  uint64_t g = std::gcd(r, d);
  if (r % 2 == 1) {
    // odd r forces d odd: r^2 N - 4P^2 is never 0 mod 4 on squarefree N
    if (d % 2 == 1 && g == 1) {
      uint64_t a = mulmod_u64(4 * P % m * (P % m) % m, modinv(r % m * (r % m) % m, m), m);
      out.residues.push_back(a);
    }
  } else {
    uint64_t l = r / 2;
    uint64_t p2 = mulmod_u64(P % m, P % m, m);
    if (g == 1) {  // d odd
      out.residues.push_back(mulmod_u64(p2, modinv(l % m * (l % m) % m, m), m));
    } else if (g == 2) {
      uint64_t b = d / 2;
      uint64_t l2 = mulmod_u64(l % m, l % m, m);
      uint64_t lb = (l2 + m - mulmod_u64(b % m, b % m, m)) % m;  // l^2 - b^2
      if (d % 4 != 0) {
        // b odd; exactly one of the two k-branches applies
        out.residues.push_back(mulmod_u64(p2, modinv(l % 2 == 1 ? l2 : lb, m), m));
      } else {
        // b even forces l odd; both branches contribute one residue
        out.residues.push_back(mulmod_u64(p2, modinv(l2, m), m));
        out.residues.push_back(mulmod_u64(p2, modinv(lb, m), m));
      }
    }
  }
  std::sort(out.residues.begin(), out.residues.end());
  return out;
}

ResidueSet residue_set_bruteforce(uint64_t r, uint64_t d, uint64_t P) {
  check_residue_args(r, d, P);
  ResidueSet out{r, d, P, {}};
  const int64_t m = (int64_t)(d * d);
  const int64_t M = 4 * m;
  const int64_t r2 = (int64_t)(r * r);
  const int64_t fourP2 = 4 * (int64_t)(P * P);
  std::vector<uint64_t> odd_prime_squares;
  for (auto [p, e] : factorize(d)) {
    (void)e;
    if (p != 2) odd_prime_squares.push_back(p * p);
  }
  for (int64_t b = 0; b < M; ++b) {
    int64_t v = r2 * b - fourP2;
    if (((v % m) + m) % m != 0) continue;
    int64_t k = v / m;
    int64_t cond = ((b % 4) * (((k % 4) + 4) % 4)) % 4;
    if (cond != 0 && cond != 1) continue;
    // the class must contain squarefree integers
    if (b % 4 == 0) continue;
    bool liftable = true;
    for (uint64_t q2 : odd_prime_squares)
      if (b % (int64_t)q2 == 0) liftable = false;
    if (!liftable) continue;
    out.residues.push_back((uint64_t)(b % m));
  }
  std::sort(out.residues.begin(), out.residues.end());
  out.residues.erase(std::unique(out.residues.begin(), out.residues.end()), out.residues.end());
  return out;
}

int64_t theta_r_bruteforce(uint64_t m, uint64_t r, uint64_t P) {
  if (m < 1) throw std::invalid_argument("theta_r: m >= 1");
  int64_t sum = 0;
  const long long mm = (long long)m;
  const long long r2 = (long long)(r * r);
  const long long fourP2 = 4 * (long long)(P * P);
  for (long long a = 0; a < mm; ++a) {
    int s1 = kronecker(a, mm);
    if (!s1) continue;
    sum += s1 * kronecker(a * r2 - fourP2, mm);
  }
  return sum;
}

int64_t theta_r_closed(uint64_t m, uint64_t r, uint64_t P) {
  if (m < 1) throw std::invalid_argument("theta_r: m >= 1");
  if (std::gcd(m, P) != 1) throw std::invalid_argument("theta_r_closed: gcd(m, P) must be 1");
  int64_t prod = 1;
  for (auto [p, e] : factorize(m)) {
    int64_t pe1 = 1;  // p^(e-1)
    for (int i = 0; i < e - 1; ++i) pe1 *= (int64_t)p;
    int64_t factor;
    if (p == 2) {
      factor = (r % 2 == 0) ? 0 : (e % 2 == 1 ? -pe1 : pe1);
    } else if (r % p == 0) {
      factor = (e % 2 == 1) ? 0 : pe1 * (int64_t)(p - 1);
    } else {
      factor = (e % 2 == 1) ? -pe1 : pe1 * (int64_t)(p - 2);
    }
    if (factor == 0) return 0;
    prod *= factor;
  }
  return prod;
}

int64_t phi_tilde_bruteforce(uint64_t r, uint64_t d, uint64_t g, uint64_t P) {
  if (g < 1) throw std::invalid_argument("phi_tilde: g >= 1");
  ResidueSet R = residue_set_bruteforce(r, d, P);
  if (!R.admissible()) throw std::invalid_argument("phi_tilde: (r, d) not admissible");
  const long long m = (long long)(d * d);
  const long long gg = (long long)g;
  const long long r2 = (long long)(r * r);
  const long long fourP2 = 4 * (long long)(P * P);
  int64_t sum = 0;
  for (uint64_t rho : R.residues) {
    for (long long a = (long long)rho; a < m * gg; a += m) {
      long long v = a * r2 - fourP2;
      long long q = v / m;  // exact: d^2 | a r^2 - 4P^2 on the residue set
      sum += kronecker(a, gg) * kronecker(q, gg);
    }
  }
  return sum;
}

int64_t phi_tilde_closed(uint64_t r, uint64_t d, uint64_t g, uint64_t P) {
  if (g < 1) throw std::invalid_argument("phi_tilde: g >= 1");
  if (residue_table_cardinality(r, d) == 0) throw std::invalid_argument("phi_tilde: (r, d) not admissible");
  for (auto [p, e] : factorize(g)) {
    (void)e;
    if (d % p != 0) throw std::invalid_argument("phi_tilde_closed: rad(g) must divide d");
  }
  (void)P;
  bool square = [&] {
    uint64_t s = isqrt_u64(g);
    return s * s == g;
  }();
  uint64_t gd = std::gcd(r, d);
  int64_t mult;
  if (g % 2 == 1)
    mult = (d % 4 == 0) ? 2 : 1;
  else if (gd == 2 && (r % 4 == 0 || d % 4 == 0))
    mult = 2;
  else
    return 0;
  if (!square) return 0;
  return mult * (int64_t)euler_phi(g);
}

bool lemma54_factorization_check(uint64_t r, uint64_t d, uint64_t n, uint64_t P) {
  if (n < 1 || std::gcd(n, P) != 1) throw std::invalid_argument("lemma54: n >= 1 with gcd(n, P) = 1");
  ResidueSet R = residue_set_bruteforce(r, d, P);
  if (!R.admissible()) throw std::invalid_argument("lemma54: (r, d) not admissible");
  const long long f = (n % 2 == 0) ? 4 : 1;
  const long long m = (long long)(d * d);
  const long long top = f * m * (long long)n;
  const long long r2 = (long long)(r * r);
  const long long fourP2 = 4 * (long long)(P * P);
  int64_t lhs = 0;
  for (long long b = 0; b < top; ++b) {
    if (!R.contains((uint64_t)(b % m))) continue;
    long long q = (b * r2 - fourP2) / m;
    lhs += kronecker(b, (long long)n) * kronecker(q, (long long)n);
  }
  uint64_t g = 1;
  uint64_t n1 = n;
  for (auto [p, e] : factorize(d)) {
    (void)e;
    while (n1 % p == 0) {
      n1 /= p;
      g *= p;
    }
  }
  int64_t rhs = f * phi_tilde_bruteforce(r, d, g, P) * theta_r_bruteforce(n1, r, P);
  return lhs == rhs;
}

namespace {

int64_t s_ndr_impl(uint64_t n, uint64_t d, uint64_t r, uint64_t P, uint64_t X, uint64_t Y,
                   bool class_major) {
  if (X < 1) throw std::invalid_argument("s_ndr: X >= 1");
  unsigned __int128 lhs = (unsigned __int128)r * r * (X + Y);
  if (lhs >= (unsigned __int128)4 * P * P)
    throw std::invalid_argument("s_ndr: need 4P^2 > r^2 (X+Y)");
  ResidueSet R = residue_set(r, d, P);
  if (!R.admissible()) return 0;
  SquarefreeSieve sf = sieve_squarefree(X, X + Y);
  const long long m = (long long)(d * d);
  const long long r2 = (long long)(r * r);
  const long long fourP2 = 4 * (long long)(P * P);
  auto term = [&](uint64_t N) -> int64_t {
    if (!sf.is_squarefree(N) || N % P == 0) return 0;
    long long q = ((long long)N * r2 - fourP2) / m;
    return kronecker((long long)N, (long long)n) * kronecker(q, (long long)n);
  };
  int64_t sum = 0;
  if (class_major) {
    for (uint64_t rho : R.residues) {
      uint64_t start = X + ((rho + (uint64_t)m - X % (uint64_t)m) % (uint64_t)m);
      for (uint64_t N = start; N <= X + Y; N += (uint64_t)m) sum += term(N);
    }
  } else {
    for (uint64_t N = X; N <= X + Y; ++N) {
      if (!R.contains(N % (uint64_t)m)) continue;
      sum += term(N);
    }
  }
  return sum;
}

}  // namespace

int64_t s_ndr(uint64_t n, uint64_t d, uint64_t r, uint64_t P, uint64_t X, uint64_t Y) {
  return s_ndr_impl(n, d, r, P, X, Y, false);
}

int64_t s_ndr_class_major(uint64_t n, uint64_t d, uint64_t r, uint64_t P, uint64_t X, uint64_t Y) {
  return s_ndr_impl(n, d, r, P, X, Y, true);
}

}  // namespace murmur
