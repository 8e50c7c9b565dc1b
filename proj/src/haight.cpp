#include <cmath>

#include "covsys/construct.hpp"

namespace covsys {

namespace {

// Product of a list of BigInts by pairwise reduction.
BigInt product_tree(std::vector<BigInt> v) {
  if (v.empty()) return 1;
  while (v.size() > 1) {
    std::vector<BigInt> next;
    next.reserve((v.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) next.push_back(v[i] * v[i + 1]);
    if (v.size() % 2) next.push_back(v.back());
    v = std::move(next);
  }
  return v[0];
}

}  // namespace

HaightReport haight_moduli(std::uint64_t N, bool full_divisor_set, std::uint64_t guard,
                           std::uint64_t exact_guard) {
  if (N < 3) throw InputError("haight_moduli requires N >= 3");
  HaightReport out;
  out.N = N;
  const double logN = std::log(static_cast<double>(N));
  out.threshold = std::exp(std::sqrt(logN)) * logN;
  if (out.threshold < static_cast<double>(N)) out.primes = primes_in(out.threshold, static_cast<double>(N));
  if (out.primes.empty())
    throw InputError("no primes in (" + std::to_string(out.threshold) + ", " + std::to_string(N) + "]");

  const std::size_t k = out.primes.size();
  BigInt H = 1, sigma = 1;
  for (auto p : out.primes) {
    H *= to_big(p);
    sigma *= to_big(p + 1);
  }
  out.sigma_ratio = make_rational(sigma, H);
  if (!full_divisor_set) return out;

  if (k >= 63 || (std::uint64_t{1} << k) > guard)
    throw GuardExceeded("Haight divisor enumeration", "2^" + std::to_string(k), std::to_string(guard));
  const std::uint64_t subsets = std::uint64_t{1} << k;
  out.divisor_count = subsets - 1;

  // Divisors indexed by subsets of the primes; d = H / (complement).
  std::vector<BigInt> divisor(subsets), sigma_of(subsets);
  std::vector<long double> divisor_ld(subsets);
  divisor[0] = 1;
  sigma_of[0] = 1;
  divisor_ld[0] = 1;
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    unsigned low = static_cast<unsigned>(__builtin_ctzll(mask));
    std::uint64_t rest = mask & (mask - 1);
    divisor[mask] = divisor[rest] * to_big(out.primes[low]);
    sigma_of[mask] = sigma_of[rest] * to_big(out.primes[low] + 1);
    divisor_ld[mask] = divisor_ld[rest] * static_cast<long double>(out.primes[low]);
  }

  long double log_alpha = 0;
  for (std::uint64_t mask = 1; mask < subsets; ++mask) log_alpha += std::log1p(-1.0L / divisor_ld[mask]);
  out.log_alpha = log_alpha;
  out.alpha = std::exp(log_alpha);

  if (subsets <= exact_guard) {
    std::vector<BigInt> nums, dens;
    nums.reserve(subsets);
    dens.reserve(subsets);
    for (std::uint64_t mask = 1; mask < subsets; ++mask) {
      nums.push_back(divisor[mask] - 1);
      dens.push_back(divisor[mask]);
    }
    out.alpha_exact = make_rational(product_tree(std::move(nums)), product_tree(std::move(dens)));
  }

  // sum over d | H, d > 1 of (sum_{d | d1 | H} 1/d1)^2 where the inner sum
  // is sigma(H/d)/H; and sum over d > 1 of 1/d^2 = (H/d)^2 / H^2.
  const std::uint64_t full = subsets - 1;
  BigInt stage1 = 0, inv_squares = 0;
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    const std::uint64_t comp = full & ~mask;
    stage1 += sigma_of[comp] * sigma_of[comp];
    inv_squares += divisor[comp] * divisor[comp];
  }
  const BigInt H2 = H * H;
  out.beta_stage1 = make_rational(stage1, H2);
  const Rational sum_inv_sq = make_rational(inv_squares, H2);
  out.beta_stage2 = sum_inv_sq * out.sigma_ratio * out.sigma_ratio;

  // beta over unordered pairs of distinct divisors > 1 sharing a prime:
  // ordered pairs of divisors > 1 minus the coprime ones, minus the
  // diagonal, halved. Coprime ordered pairs (1 allowed) give prod (1 + 2/p).
  Rational coprime_all = 1;
  for (auto p : out.primes) coprime_all *= make_rational(static_cast<std::int64_t>(p + 2), p);
  const Rational s1 = out.sigma_ratio - 1;
  const Rational coprime_both = coprime_all - 2 * out.sigma_ratio + 1;
  out.beta = (s1 * s1 - coprime_both - sum_inv_sq) / 2;
  return out;
}

}  // namespace covsys
