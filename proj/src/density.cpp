#include "covsys/density.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "bitset.hpp"

namespace covsys {

namespace {

constexpr std::uint64_t kBlockBits = 1ULL << 20;

std::uint64_t require_period(const ResidueSystem& system, std::uint64_t guard) {
  auto L = lcm_within(system, guard);
  if (!L) {
    auto g = lcm_guarded(system.moduli(), kLcmGuardCeilingBits);
    throw GuardExceeded("scan period",
                        g.value ? g.value->get_str() : ("~2^" + std::to_string(g.bit_length)),
                        std::to_string(guard));
  }
  return *L;
}

// Distinct classes with any class contained in another one dropped:
// (m, s) is inside (n, r) when n | m and s = r (mod n).
std::vector<ResidueClass> essential_classes(const ResidueSystem& system) {
  std::vector<ResidueClass> cls(system.begin(), system.end());
  std::sort(cls.begin(), cls.end());
  cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
  if (cls.size() > 4000) return cls;
  std::vector<ResidueClass> kept;
  for (const auto& c : cls) {
    bool redundant = std::any_of(kept.begin(), kept.end(), [&](const ResidueClass& k) {
      return c.modulus() % k.modulus() == 0 && c.residue() % k.modulus() == k.residue();
    });
    if (!redundant) kept.push_back(c);
  }
  return kept;
}

// Scans [0, period) block by block. visit(lo, block) returns false to stop.
template <class Visit>
void scan_blocks(const std::vector<ResidueClass>& classes, std::uint64_t period, Visit&& visit) {
  for (std::uint64_t lo = 0; lo < period; lo += kBlockBits) {
    std::uint64_t len = std::min(kBlockBits, period - lo);
    detail::Bitset block(len, true);
    for (const auto& c : classes) {
      std::uint64_t n = c.modulus();
      std::uint64_t offset = (c.residue() + n - lo % n) % n;
      block.clear_stride(offset, n);
    }
    if (!visit(lo, block)) return;
  }
}

}  // namespace

std::string_view to_string(DensityMethod m) noexcept {
  switch (m) {
    case DensityMethod::lcm_scan: return "lcm-scan";
    case DensityMethod::coprime_product: return "coprime-product";
    case DensityMethod::decomposition: return "decomposition";
  }
  return "?";
}

DensityReport exact_density(const ResidueSystem& system, std::uint64_t guard) {
  std::uint64_t period = require_period(system, guard);
  auto classes = essential_classes(system);
  std::uint64_t uncovered = 0;
  scan_blocks(classes, period, [&](std::uint64_t, const detail::Bitset& block) {
    uncovered += block.count();
    return true;
  });
  DensityReport report;
  report.period = to_big(period);
  report.uncovered_count = to_big(uncovered);
  report.value = make_rational(report.uncovered_count, report.period);
  report.method = DensityMethod::lcm_scan;
  return report;
}

DensityReport density_auto(const ResidueSystem& system, std::uint64_t guard) {
  // Distinct residues per modulus.
  std::map<std::uint64_t, std::vector<std::uint64_t>> by_modulus;
  for (const auto& c : system) by_modulus[c.modulus()].push_back(c.residue());
  bool coprime = true;
  for (auto a = by_modulus.begin(); coprime && a != by_modulus.end(); ++a)
    for (auto b = std::next(a); b != by_modulus.end(); ++b)
      if (std::gcd(a->first, b->first) != 1) {
        coprime = false;
        break;
      }
  if (!coprime) return exact_density(system, guard);

  DensityReport report;
  report.method = DensityMethod::coprime_product;
  report.period = 1;
  report.uncovered_count = 1;
  for (auto& [n, residues] : by_modulus) {
    std::sort(residues.begin(), residues.end());
    auto distinct = static_cast<std::uint64_t>(
        std::unique(residues.begin(), residues.end()) - residues.begin());
    report.period *= to_big(n);
    report.uncovered_count *= to_big(n - distinct);
  }
  report.value = make_rational(report.uncovered_count, report.period);
  return report;
}

Rational density_coprime(const ResidueSystem& system) {
  const auto& cls = system.classes();
  for (std::size_t i = 0; i < cls.size(); ++i)
    for (std::size_t j = i + 1; j < cls.size(); ++j)
      if (std::gcd(cls[i].modulus(), cls[j].modulus()) != 1)
        throw NotCoprimeError("moduli " + std::to_string(cls[i].modulus()) + " and " +
                              std::to_string(cls[j].modulus()) + " are not coprime");
  Rational product = 1;
  for (const auto& c : cls) product *= make_rational(static_cast<std::int64_t>(c.modulus() - 1), c.modulus());
  return product;
}

bool classes_disjoint(const ResidueClass& a, const ResidueClass& b) {
  std::uint64_t g = std::gcd(a.modulus(), b.modulus());
  return a.residue() % g != b.residue() % g;
}

ExactCoverVerdict is_exact_cover(const ResidueSystem& system) {
  ExactCoverVerdict v;
  v.reciprocal_sum = system.reciprocal_sum();
  v.deficit = Rational(1) - v.reciprocal_sum;

  // Group indices by modulus, then compare whole groups: classes with
  // moduli n, m meet iff their residues agree mod gcd(n, m).
  std::map<std::uint64_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < system.size(); ++i) groups[system[i].modulus()].push_back(i);

  std::optional<std::pair<std::size_t, std::size_t>> best;
  auto consider = [&](std::size_t i, std::size_t j) {
    std::pair<std::size_t, std::size_t> p{std::min(i, j), std::max(i, j)};
    if (!best || p < *best) best = p;
  };

  // Minimal index per residue mod g, for one group.
  auto residue_minima = [&](const std::vector<std::size_t>& idx, std::uint64_t g) {
    std::unordered_map<std::uint64_t, std::size_t> first;
    first.reserve(idx.size() * 2);
    for (auto i : idx) first.try_emplace(system[i].residue() % g, i);  // idx ascending
    return first;
  };

  for (auto a = groups.begin(); a != groups.end(); ++a) {
    const auto& ia = a->second;
    {
      std::unordered_map<std::uint64_t, std::size_t> seen;
      for (auto i : ia) {
        auto [it, fresh] = seen.try_emplace(system[i].residue(), i);
        if (!fresh) consider(it->second, i);
      }
    }
    for (auto b = std::next(a); b != groups.end(); ++b) {
      const auto& ib = b->second;
      std::uint64_t g = std::gcd(a->first, b->first);
      if (g == 1) {
        consider(ia.front(), ib.front());
        continue;
      }
      auto ma = residue_minima(ia, g);
      auto mb = residue_minima(ib, g);
      for (auto& [res, i] : ma) {
        auto it = mb.find(res);
        if (it != mb.end()) consider(i, it->second);
      }
    }
  }

  v.overlapping_pair = best;
  if (best) {
    const auto& x = system[best->first];
    const auto& y = system[best->second];
    v.violation = "classes " + std::to_string(best->first) + " (" + std::to_string(x.residue()) +
                  " mod " + std::to_string(x.modulus()) + ") and " + std::to_string(best->second) +
                  " (" + std::to_string(y.residue()) + " mod " + std::to_string(y.modulus()) +
                  ") intersect";
  } else if (v.reciprocal_sum != 1) {
    v.violation = "reciprocal sum is " + to_string(v.reciprocal_sum) + ", deficit " + to_string(v.deficit);
  }
  v.exact = !best && v.reciprocal_sum == 1;
  return v;
}

Rational delta_plus(const ModuliSet& moduli, std::uint64_t guard) {
  // Primitive subset: a multiple of a kept modulus adds nothing.
  std::vector<std::uint64_t> prim;
  for (auto n : moduli.distinct_values()) {
    if (std::none_of(prim.begin(), prim.end(), [n](std::uint64_t k) { return n % k == 0; }))
      prim.push_back(n);
  }
  if (prim.empty()) return 1;
  if (prim.front() == 1) return 0;

  if (prim.size() > 25) {
    ResidueSystem zeros;
    for (auto n : prim) zeros.add(n, 0);
    return exact_density(zeros, guard).value;
  }
  if ((1ULL << prim.size()) > guard)
    throw GuardExceeded("inclusion-exclusion terms", std::to_string(1ULL << prim.size()),
                        std::to_string(guard));

  // Sum over subsets T of (-1)^|T| / lcm(T). When the next modulus already
  // divides lcm(T), the subtrees with and without it cancel exactly.
  std::sort(prim.begin(), prim.end());
  auto L_small = lcm_within(prim, (1ULL << 62));
  if (L_small) {
    const std::uint64_t L = *L_small;
    __int128 total = 0;
    auto dfs = [&](auto&& self, std::size_t i, std::uint64_t cur, int sign) -> void {
      if (i == prim.size()) {
        total += sign * static_cast<__int128>(L / cur);
        return;
      }
      if (cur % prim[i] == 0) return;
      self(self, i + 1, cur, sign);
      self(self, i + 1, *lcm_bounded(cur, prim[i], L), -sign);
    };
    dfs(dfs, 0, 1, 1);
    BigInt num = to_big(static_cast<std::uint64_t>(total));  // total lies in [0, L]
    return make_rational(num, to_big(L));
  }

  BigInt L = *lcm_guarded(ModuliSet(prim), kLcmGuardCeilingBits).value;
  BigInt total = 0;
  auto dfs = [&](auto&& self, std::size_t i, const BigInt& cur, int sign) -> void {
    if (i == prim.size()) {
      if (sign > 0) total += L / cur; else total -= L / cur;
      return;
    }
    BigInt p = to_big(prim[i]);
    if (cur % p == 0) return;
    self(self, i + 1, cur, sign);
    BigInt next;
    mpz_lcm(next.get_mpz_t(), cur.get_mpz_t(), p.get_mpz_t());
    self(self, i + 1, next, -sign);
  };
  dfs(dfs, 0, BigInt(1), 1);
  return make_rational(total, L);
}

namespace {

DeltaMinusResult delta_minus_greedy(const ModuliSet& moduli, std::uint64_t guard) {
  auto order = moduli.expanded();
  auto L = lcm_within(order, guard);
  if (!L) throw GuardExceeded("greedy period (lcm)", "> " + std::to_string(guard), std::to_string(guard));
  detail::Bitset uncovered(*L, true);
  DeltaMinusResult out;
  out.mode = DeltaMinusMode::greedy;
  std::vector<std::uint64_t> counts;
  for (auto n : order) {
    counts.assign(n, 0);
    uncovered.for_each_set([&](std::uint64_t x) { ++counts[x % n]; });
    auto best = std::max_element(counts.begin(), counts.end());  // first maximum
    std::uint64_t r = static_cast<std::uint64_t>(best - counts.begin());
    uncovered.clear_stride(r, n);
    out.witness.add(n, static_cast<std::int64_t>(r));
  }
  out.value = make_rational(to_big(uncovered.count()), to_big(*L));
  return out;
}

DeltaMinusResult delta_minus_exhaustive(const ModuliSet& moduli, std::uint64_t guard) {
  std::vector<std::uint64_t> order = moduli.expanded();
  std::uint64_t product = 1;
  for (auto n : order) {
    auto p = mul_bounded(product, n, guard);
    if (!p) throw GuardExceeded("residue choices (product of moduli)", "> " + std::to_string(guard),
                                std::to_string(guard));
    product = *p;
  }
  DeltaMinusResult out;
  out.mode = DeltaMinusMode::exhaustive;
  if (order.empty()) {
    out.value = 1;
    return out;
  }
  std::uint64_t L = *lcm_within(order, guard);
  // Largest moduli first; the first residue is fixed to 0 since shifting
  // every residue by the same amount leaves the density unchanged.
  std::sort(order.rbegin(), order.rend());
  const std::size_t k = order.size();
  std::vector<std::uint64_t> max_removal_suffix(k + 1, 0);
  for (std::size_t i = k; i-- > 0;) max_removal_suffix[i] = max_removal_suffix[i + 1] + L / order[i];

  std::uint64_t best = L + 1;
  std::vector<std::uint64_t> choice(k, 0), best_choice(k, 0);
  std::vector<detail::Bitset> level(k + 1);
  level[0] = detail::Bitset(L, true);

  auto dfs = [&](auto&& self, std::size_t depth, std::uint64_t uncovered) -> void {
    if (best == 0) return;
    if (depth == k) {
      if (uncovered < best) {
        best = uncovered;
        best_choice = choice;
      }
      return;
    }
    // Even if every remaining class removed a full share, no improvement.
    if (uncovered > max_removal_suffix[depth] && uncovered - max_removal_suffix[depth] >= best) return;
    const std::uint64_t n = order[depth];
    const detail::Bitset& cur = level[depth];
    std::vector<std::pair<std::uint64_t, std::uint64_t>> gains;  // (-gain, r) sorted
    if (depth == 0) {
      gains.push_back({0, 0});
    } else {
      std::vector<std::uint64_t> cnt(n, 0);
      cur.for_each_set([&](std::uint64_t x) { ++cnt[x % n]; });
      for (std::uint64_t r = 0; r < n; ++r) gains.push_back({L - cnt[r], r});
      std::sort(gains.begin(), gains.end());
    }
    for (auto [neg_gain, r] : gains) {
      level[depth + 1] = cur;
      level[depth + 1].clear_stride(r, n);
      choice[depth] = r;
      self(self, depth + 1, level[depth + 1].count());
      if (best == 0) return;
    }
  };
  dfs(dfs, 0, L);

  out.value = make_rational(to_big(best), to_big(L));
  // Report classes in ascending modulus order.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  for (std::size_t i = 0; i < k; ++i) pairs.push_back({order[i], best_choice[i]});
  std::sort(pairs.begin(), pairs.end());
  for (auto [n, r] : pairs) out.witness.add(n, static_cast<std::int64_t>(r));
  return out;
}

}  // namespace

DeltaMinusResult delta_minus(const ModuliSet& moduli, DeltaMinusMode mode, std::uint64_t guard) {
  DeltaMinusResult out = mode == DeltaMinusMode::exhaustive ? delta_minus_exhaustive(moduli, guard)
                                                            : delta_minus_greedy(moduli, guard);
  out.alpha = 1;
  for (auto n : moduli.expanded()) out.alpha *= make_rational(static_cast<std::int64_t>(n - 1), n);
  out.reciprocal_sum = 0;
  for (auto [n, k] : moduli.counts()) out.reciprocal_sum += make_rational(static_cast<std::int64_t>(k), n);
  return out;
}

std::optional<std::uint64_t> uncovered_witness(const ResidueSystem& system, std::uint64_t guard) {
  std::uint64_t period = require_period(system, guard);
  auto classes = essential_classes(system);
  std::optional<std::uint64_t> found;
  scan_blocks(classes, period, [&](std::uint64_t lo, const detail::Bitset& block) {
    std::uint64_t f = block.first();
    if (f < block.size()) {
      found = lo + f;
      return false;
    }
    return true;
  });
  return found;
}

}  // namespace covsys
