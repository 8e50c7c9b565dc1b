#include "covsys/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bitset.hpp"
#include "covsys/construct.hpp"

namespace covsys {

namespace {

using u128 = unsigned __int128;

BigInt big128(u128 v) {
  return to_big(static_cast<std::uint64_t>(v >> 64)) * (BigInt(1) << 64) +
         to_big(static_cast<std::uint64_t>(v));
}

void finish(MomentReport& r, const ModuliSet& T) {
  r.variance = r.second_moment - r.mean * r.mean;
  double scale = variance_scale(T);
  if (r.variance == 0) r.bound_ratio = 0;
  else if (scale > 0) r.bound_ratio = to_double(r.variance) / scale;
  else r.bound_ratio = std::numeric_limits<double>::infinity();
}

}  // namespace

std::string_view to_string(MomentMethod m) noexcept {
  switch (m) {
    case MomentMethod::enumeration: return "enumeration";
    case MomentMethod::pair_formula: return "pair-formula";
    case MomentMethod::monte_carlo: return "monte-carlo";
  }
  return "?";
}

Rational expected_delta(const ModuliSet& T) { return alpha(T); }

BigInt system_count(const ModuliSet& T) {
  BigInt W = 1;
  for (auto [n, k] : T.counts())
    for (std::uint64_t i = 0; i < k; ++i) W *= to_big(n);
  return W;
}

double variance_scale(const ModuliSet& T) {
  if (T.empty()) return 0;
  double N = static_cast<double>(T.min());
  double a = to_double(alpha(T));
  return a * a * std::log(N) / (N * N);
}

MomentReport enumerate_moments(const ModuliSet& T, std::uint64_t guard) {
  BigInt Wbig = system_count(T);
  auto W = to_u64(Wbig);
  if (!W || *W > guard) throw GuardExceeded("W(T) for enumeration", Wbig.get_str(), std::to_string(guard));

  MomentReport report;
  report.method = MomentMethod::enumeration;
  auto moduli = T.expanded();
  if (moduli.empty()) {
    report.mean = 1;
    report.second_moment = 1;
    finish(report, T);
    return report;
  }
  std::reverse(moduli.begin(), moduli.end());
  const std::uint64_t L = *lcm_within(moduli, *W);
  const std::size_t depth = moduli.size();

  // Shifting every residue by t permutes the family and preserves delta,
  // so the first residue is pinned to 0 and its count is multiplied back.
  u128 sum_u = 0, sum_u2 = 0;
  std::vector<detail::Bitset> level(depth);
  std::vector<std::uint64_t> counts;
  auto rec = [&](auto&& self, std::size_t i, const detail::Bitset& live) -> void {
    const std::uint64_t n = moduli[i];
    const std::uint64_t choices = i == 0 ? 1 : n;
    if (i + 1 == depth) {
      counts.assign(n, 0);
      std::uint64_t total = 0;
      live.for_each_set([&](std::uint64_t x) {
        ++counts[x % n];
        ++total;
      });
      for (std::uint64_t r = 0; r < choices; ++r) {
        u128 u = total - counts[r];
        sum_u += u;
        sum_u2 += u * u;
      }
      return;
    }
    for (std::uint64_t r = 0; r < choices; ++r) {
      level[i] = live;
      level[i].clear_stride(r, n);
      self(self, i + 1, level[i]);
    }
  };
  rec(rec, 0, detail::Bitset(L));

  const BigInt first = to_big(moduli[0]);
  const BigInt Lb = to_big(L);
  report.mean = make_rational(big128(sum_u) * first, Wbig * Lb);
  report.second_moment = make_rational(big128(sum_u2) * first, Wbig * Lb * Lb);
  finish(report, T);
  return report;
}

MomentReport pair_formula_moments(const ModuliSet& T, std::uint64_t guard) {
  if (!T.distinct()) throw InputError("pair formula requires distinct moduli");
  auto moduli = T.distinct_values();
  for (auto n : moduli)
    if (n < 3) throw InputError("pair formula requires every modulus >= 3 (got " + std::to_string(n) + ")");
  if (moduli.size() >= 63 || (std::uint64_t{1} << moduli.size()) > guard)
    throw GuardExceeded("pair formula subsets", "2^" + std::to_string(moduli.size()), std::to_string(guard));

  Rational sum = 0;
  auto rec = [&](auto&& self, std::size_t i, const BigInt& M, const BigInt& L) -> void {
    if (i == moduli.size()) {
      sum += make_rational(BigInt(1), M * L);
      return;
    }
    self(self, i + 1, M, L);
    BigInt n = to_big(moduli[i]);
    BigInt L2;
    mpz_lcm(L2.get_mpz_t(), L.get_mpz_t(), n.get_mpz_t());
    self(self, i + 1, M * (n - 2), L2);
  };
  rec(rec, 0, BigInt(1), BigInt(1));

  Rational prefactor = 1;
  for (auto n : moduli) prefactor *= make_rational(static_cast<std::int64_t>(n - 2), n);

  MomentReport report;
  report.method = MomentMethod::pair_formula;
  report.mean = expected_delta(T);
  report.second_moment = prefactor * sum;
  finish(report, T);
  return report;
}

ResidueSystem sample_system(const ModuliSet& T, std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t state = seed ^ (trial * 0xd1b54a32d192ed03ULL);
  splitmix64(state);
  ResidueSystem system;
  for (auto n : T.expanded()) system.add(n, static_cast<std::int64_t>(uniform_below(n, state)));
  return system;
}

MomentReport sample_moments(const ModuliSet& T, std::uint64_t trials, std::uint64_t seed,
                            DecompositionGuards guards) {
  if (trials < 1) throw InputError("sample_moments requires trials >= 1");
  Rational s1 = 0, s2 = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rational d = density_best(sample_system(T, seed, t), guards).value;
    s1 += d;
    s2 += d * d;
  }
  MomentReport report;
  report.method = MomentMethod::monte_carlo;
  report.sample_count = trials;
  const BigInt n = to_big(trials);
  report.mean = s1 / n;
  report.second_moment = s2 / n;
  finish(report, T);
  if (trials > 1) {
    double unbiased = to_double(report.variance) * static_cast<double>(trials) / static_cast<double>(trials - 1);
    report.standard_error = std::sqrt(unbiased / static_cast<double>(trials));
  }
  return report;
}

VarianceScan variance_bound_scan(const std::vector<ModuliSet>& family, std::uint64_t enumeration_guard,
                                 std::uint64_t pair_guard) {
  VarianceScan scan;
  for (const auto& T : family) {
    bool pair_ok = T.distinct() && !T.empty() && T.min() >= 3 && T.size() < 63 &&
                   (std::uint64_t{1} << T.size()) <= pair_guard;
    MomentReport m = pair_ok ? pair_formula_moments(T, pair_guard) : enumerate_moments(T, enumeration_guard);
    VarianceRow row;
    row.T = T;
    row.variance = m.variance;
    row.scale = variance_scale(T);
    row.ratio = m.bound_ratio;
    row.method = m.method;
    if (!std::isfinite(row.ratio)) throw InternalError("variance ratio is not finite");
    scan.max_ratio = std::max(scan.max_ratio, row.ratio);
    scan.rows.push_back(std::move(row));
  }
  return scan;
}

}  // namespace covsys
