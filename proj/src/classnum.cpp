#include "murmur/classnum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace murmur {

bool valid_discriminant(uint64_t d) { return d > 0 && (d % 4 == 0 || d % 4 == 3); }

namespace {

constexpr uint64_t kLargeThreshold = 50000;  // switch to the sieved factoring path
constexpr size_t kBlock = 1 << 16;

// Counts (or lists, when out != nullptr) the reduced primitive forms with
// middle coefficient b, given m = (b^2 + d)/4 and its factorization.
uint64_t count_forms_for_b(uint64_t b, uint64_t m,
                           const std::vector<std::pair<uint64_t, int>>& facs,
                           std::vector<uint64_t>& divbuf,
                           std::vector<ReducedForm>* out) {
  divbuf.clear();
  divbuf.push_back(1);
  for (auto [p, e] : facs) {
    size_t sz = divbuf.size();
    uint64_t pe = 1;
    for (int i = 0; i < e; ++i) {
      pe *= p;
      for (size_t j = 0; j < sz; ++j) divbuf.push_back(divbuf[j] * pe);
    }
  }
  uint64_t lo = std::max<uint64_t>(b, 1);
  uint64_t cnt = 0;
  for (uint64_t a : divbuf) {
    if (a < lo || a * a > m) continue;
    uint64_t c = m / a;
    uint64_t content = std::gcd(std::gcd(a, b), c);
    if (content != 1) continue;
    if (b == 0 || a == b || a == c) {
      cnt += 1;
      if (out) out->push_back({(int64_t)a, (int64_t)b, (int64_t)c});
    } else {
      cnt += 2;
      if (out) {
        out->push_back({(int64_t)a, (int64_t)b, (int64_t)c});
        out->push_back({(int64_t)a, -(int64_t)b, (int64_t)c});
      }
    }
  }
  return cnt;
}

uint64_t gauss_h_trial(uint64_t d, std::vector<ReducedForm>* out) {
  uint64_t B = isqrt_u64(d / 3);
  uint64_t b0 = d % 2;
  auto primes = primes_up_to(isqrt_u64((B * B + d) / 4));
  std::vector<std::pair<uint64_t, int>> facs;
  std::vector<uint64_t> divbuf;
  uint64_t total = 0;
  for (uint64_t b = b0; b <= B; b += 2) {
    uint64_t m = (b * b + d) / 4;
    facs.clear();
    uint64_t rem = m;
    for (uint32_t p : *primes) {
      if ((uint64_t)p * p > rem) break;
      if (rem % p == 0) {
        int e = 0;
        while (rem % p == 0) {
          rem /= p;
          ++e;
        }
        facs.emplace_back(p, e);
      }
    }
    if (rem > 1) facs.emplace_back(rem, 1);
    total += count_forms_for_b(b, m, facs, divbuf, out);
  }
  return total;
}

// Sieved path: factors every m(b) = (b^2 + d)/4 at once by walking the
// root progressions of b^2 = -d (mod p), then counts forms per b.
uint64_t gauss_h_sieved(uint64_t d) {
  uint64_t B = isqrt_u64(d / 3);
  uint64_t b0 = d % 2;
  if (B < b0) return 0;
  uint64_t nb = (B - b0) / 2 + 1;
  uint64_t maxm = (B * B + d) / 4;
  uint64_t L = isqrt_u64(maxm);
  auto primes = primes_up_to(L);

  struct Hit {
    uint32_t p;
    uint32_t idx0;  // first b-index hit, before block offsets
  };
  std::vector<Hit> hits;
  hits.reserve(primes->size());
  for (uint32_t p : *primes) {
    if (p == 2 || (uint64_t)p > L) continue;
    uint64_t nd = (p - d % p) % p;
    uint64_t root;
    if (!sqrt_mod_prime(nd, p, root)) continue;
    // b-index i satisfies b0 + 2i = +-root (mod p)
    uint64_t inv2 = ((uint64_t)p + 1) / 2;
    for (uint64_t r : {root, p - root}) {
      uint64_t i0 = mulmod_u64((r % p + p - b0 % p) % p, inv2, p);
      hits.push_back({p, (uint32_t)i0});
      if (root == 0) break;
    }
  }

  std::vector<uint64_t> rem(std::min<uint64_t>(nb, kBlock));
  std::vector<std::vector<std::pair<uint64_t, int>>> facs(rem.size());
  std::vector<uint64_t> divbuf;
  uint64_t total = 0;
  for (uint64_t blo = 0; blo < nb; blo += kBlock) {
    uint64_t bn = std::min<uint64_t>(kBlock, nb - blo);
    for (uint64_t i = 0; i < bn; ++i) {
      uint64_t b = b0 + 2 * (blo + i);
      uint64_t m = (b * b + d) / 4;
      facs[i].clear();
      int e2 = 0;
      while ((m & 1) == 0) {
        m >>= 1;
        ++e2;
      }
      if (e2) facs[i].emplace_back(2, e2);
      rem[i] = m;
    }
    for (const Hit& h : hits) {
      uint64_t p = h.p;
      // first block-relative index congruent to idx0 mod p
      uint64_t off = (h.idx0 % p + p - blo % p) % p;
      for (uint64_t j = off; j < bn; j += p) {
        uint64_t& r = rem[j];
        int e = 0;
        while (r % p == 0) {
          r /= p;
          ++e;
        }
        if (e) facs[j].emplace_back(p, e);
      }
    }
    for (uint64_t i = 0; i < bn; ++i) {
      if (rem[i] > 1) facs[i].emplace_back(rem[i], 1);
      uint64_t b = b0 + 2 * (blo + i);
      total += count_forms_for_b(b, (b * b + d) / 4, facs[i], divbuf, nullptr);
    }
  }
  return total;
}

}  // namespace

std::vector<ReducedForm> reduced_forms(uint64_t d) {
  if (!valid_discriminant(d)) throw std::invalid_argument("reduced_forms: need d > 0, d = 0,3 (mod 4)");
  std::vector<ReducedForm> out;
  gauss_h_trial(d, &out);
  std::sort(out.begin(), out.end(), [](const ReducedForm& x, const ReducedForm& y) {
    return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
  });
  return out;
}

uint64_t gauss_h(uint64_t d) {
  if (d == 0 || d % 4 == 1 || d % 4 == 2) return 0;
  return d < kLargeThreshold ? gauss_h_trial(d, nullptr) : gauss_h_sieved(d);
}

uint64_t gauss_h_bruteforce(uint64_t d) {
  if (!valid_discriminant(d)) return 0;
  uint64_t cnt = 0;
  for (uint64_t a = 1; 3 * a * a <= d; ++a) {
    for (uint64_t b = 0; b <= a; ++b) {
      uint64_t num = b * b + d;
      if (num % (4 * a) != 0) continue;
      uint64_t c = num / (4 * a);
      if (c < a) continue;
      if (std::gcd(std::gcd(a, b), c) != 1) continue;
      if (b == 0 || b == a || a == c)
        cnt += 1;
      else
        cnt += 2;
    }
  }
  return cnt;
}

Rational hurwitz_H1(uint64_t d) {
  if (!valid_discriminant(d)) throw std::invalid_argument("hurwitz_H1: need d > 0, d = 0,3 (mod 4)");
  Rational sum(0);
  auto facs = factorize(d);
  std::vector<uint64_t> fs{1};
  for (auto [p, e] : facs) {
    size_t sz = fs.size();
    uint64_t pe = 1;
    for (int i = 0; i < e / 2; ++i) {
      pe *= p;
      for (size_t j = 0; j < sz; ++j) fs.push_back(fs[j] * pe);
    }
  }
  for (uint64_t f : fs) {
    uint64_t e = d / (f * f);
    if (e % 4 == 1 || e % 4 == 2) continue;
    if (e == 3)
      sum += Rational(1, 3);
    else if (e == 4)
      sum += Rational(1, 2);
    else
      sum += (long)gauss_h(e);
  }
  sum.canonicalize();
  return sum;
}

double approx_h_via_L(uint64_t d, uint64_t T) {
  if (!valid_discriminant(d)) throw std::invalid_argument("approx_h_via_L: need d = 0,3 (mod 4)");
  if (T < 1) throw std::invalid_argument("approx_h_via_L: T >= 1");
  long long md = -(long long)d;
  double s = 0.0;
  for (uint64_t n = T; n >= 1; --n) {
    int chi = kronecker(md, (long long)n);
    if (chi) s += (double)chi / (double)n;
  }
  return std::sqrt((double)d) / M_PI * s;
}

ClassNumberCache::Entry ClassNumberCache::get(uint64_t d) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(d);
    if (it != map_.end()) return it->second;
  }
  Entry e;
  e.h = gauss_h(d);
  if (valid_discriminant(d)) {
    // six_h1 = 6 * H_1(-d); square-quotient terms recurse through the cache
    Rational sum((long)e.h);
    auto facs = factorize(d);
    std::vector<uint64_t> fs{1};
    for (auto [p, ex] : facs) {
      size_t sz = fs.size();
      uint64_t pe = 1;
      for (int i = 0; i < ex / 2; ++i) {
        pe *= p;
        for (size_t j = 0; j < sz; ++j) fs.push_back(fs[j] * pe);
      }
    }
    for (uint64_t f : fs) {
      if (f == 1) continue;
      uint64_t q = d / (f * f);
      if (q % 4 == 1 || q % 4 == 2) continue;
      if (q == 3)
        sum += Rational(1, 3);
      else if (q == 4)
        sum += Rational(1, 2);
      else
        sum += (long)h(q);
    }
    // the top term itself gets the exceptional weight when d is 3 or 4
    if (d == 3) sum += Rational(1, 3) - 1;
    if (d == 4) sum += Rational(1, 2) - 1;
    Rational six = sum * 6;
    six.canonicalize();
    if (six.get_den() != 1) throw std::logic_error("hurwitz: denominator does not divide 6");
    e.six_h1 = (int64_t)six.get_num().get_si();
  } else {
    e.six_h1 = -1;
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = map_.emplace(d, e);
  (void)inserted;
  return it->second;
}

uint64_t ClassNumberCache::h(uint64_t d) { return get(d).h; }

Rational ClassNumberCache::H1(uint64_t d) {
  if (!valid_discriminant(d)) throw std::invalid_argument("H1: need d > 0, d = 0,3 (mod 4)");
  Entry e = get(d);
  Rational r((long)e.six_h1, 6L);
  r.canonicalize();
  return r;
}

size_t ClassNumberCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return map_.size();
}

namespace {

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

void ClassNumberCache::save() const {
  if (path_.empty()) throw std::logic_error("cache has no backing path");
  std::vector<std::pair<uint64_t, Entry>> rows;
  {
    std::lock_guard<std::mutex> lock(mu_);
    rows.assign(map_.begin(), map_.end());
  }
  std::sort(rows.begin(), rows.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::ostringstream body;
  for (auto& [d, e] : rows) body << d << ' ' << e.h << ' ' << e.six_h1 << '\n';
  std::ofstream f(path_, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write cache file: " + path_);
  f << body.str();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a64(body.str()));
  f << "#fnv1a64 " << buf << '\n';
}

void ClassNumberCache::load() {
  if (path_.empty()) throw std::logic_error("cache has no backing path");
  std::ifstream f(path_);
  if (!f) return;  // nothing cached yet
  std::string line, body;
  std::vector<std::pair<uint64_t, Entry>> rows;
  bool saw_footer = false;
  while (std::getline(f, line)) {
    if (line.rfind("#fnv1a64 ", 0) == 0) {
      uint64_t want = std::stoull(line.substr(9), nullptr, 16);
      if (want != fnv1a64(body)) throw std::runtime_error("cache checksum mismatch: " + path_);
      saw_footer = true;
      continue;
    }
    body += line;
    body += '\n';
    std::istringstream ls(line);
    uint64_t d, hv;
    int64_t six;
    if (!(ls >> d >> hv >> six)) throw std::runtime_error("bad cache record: " + line);
    rows.emplace_back(d, Entry{hv, six});
  }
  if (!rows.empty() && !saw_footer) throw std::runtime_error("cache missing checksum footer: " + path_);
  // spot-check a deterministic sample against fresh computation
  size_t step = std::max<size_t>(1, rows.size() / 8);
  for (size_t i = 0; i < rows.size(); i += step) {
    if (rows[i].second.h != gauss_h(rows[i].first))
      throw std::runtime_error("cache spot-check failed at d=" + std::to_string(rows[i].first));
  }
  std::lock_guard<std::mutex> lock(mu_);
  for (auto& [d, e] : rows) map_[d] = e;
}

}  // namespace murmur
