#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "covsys/core.hpp"

namespace covsys {

namespace {

constexpr std::uint32_t kSpfLimit = 1'000'000;

// Smallest prime factor for every n below kSpfLimit.
const std::vector<std::uint32_t>& spf_table() {
  static const std::vector<std::uint32_t> table = [] {
    std::vector<std::uint32_t> spf(kSpfLimit, 0);
    for (std::uint32_t i = 2; i < kSpfLimit; ++i) {
      if (spf[i] != 0) continue;
      for (std::uint64_t j = i; j < kSpfLimit; j += i)
        if (spf[j] == 0) spf[j] = i;
    }
    return spf;
  }();
  return table;
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin(std::uint64_t n) {
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for all 64-bit n.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (a % n == 0) continue;
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t pollard_rho(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  std::mt19937_64 rng(n);
  for (;;) {
    std::uint64_t c = rng() % (n - 1) + 1;
    std::uint64_t x = rng() % n, y = x, d = 1;
    auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& primes) {
  if (n == 1) return;
  if (n < kSpfLimit) {
    const auto& spf = spf_table();
    while (n > 1) {
      primes.push_back(spf[n]);
      n /= spf[n];
    }
    return;
  }
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n == 1) return;
  if (n < kSpfLimit) return factor_into(n, primes);
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  std::uint64_t d = pollard_rho(n);
  factor_into(d, primes);
  factor_into(n / d, primes);
}

std::vector<std::uint32_t> base_primes(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n < kSpfLimit) return spf_table()[n] == n;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
    if (n % p == 0) return n == p;
  return miller_rabin(n);
}

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw InputError("factorize(0)");
  std::vector<std::uint64_t> primes;
  factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> out;
  for (auto p : primes) {
    if (!out.empty() && out.back().prime == p)
      ++out.back().exponent;
    else
      out.push_back({p, 1});
  }
  return Factorization(std::move(out));
}

void for_each_prime(double a, double b, const std::function<void(std::uint64_t)>& visit) {
  if (!(b > a) || b < 2) return;
  // Integers p with a < p <= b.
  std::uint64_t lo = a < 1 ? 2 : static_cast<std::uint64_t>(std::floor(a)) + 1;
  std::uint64_t hi = static_cast<std::uint64_t>(std::floor(b));
  lo = std::max<std::uint64_t>(lo, 2);
  if (lo > hi) return;

  const auto base = base_primes(isqrt(hi));
  constexpr std::uint64_t kSegment = 1 << 18;
  std::vector<char> composite(kSegment);
  for (std::uint64_t start = lo; start <= hi; start += kSegment) {
    std::uint64_t end = std::min(hi, start + kSegment - 1);
    std::fill(composite.begin(), composite.begin() + (end - start + 1), 0);
    for (std::uint64_t p : base) {
      if (p * p > end) break;
      std::uint64_t first = std::max(p * p, (start + p - 1) / p * p);
      for (std::uint64_t m = first; m <= end; m += p) composite[m - start] = 1;
    }
    for (std::uint64_t x = start; x <= end; ++x)
      if (!composite[x - start]) visit(x);
  }
}

std::vector<std::uint64_t> primes_in(double a, double b) {
  if (!(a < b)) throw InputError("primes_in requires a < b");
  std::vector<std::uint64_t> out;
  for_each_prime(a, b, [&](std::uint64_t p) { out.push_back(p); });
  return out;
}

}  // namespace covsys
