#include "covsys/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace covsys {

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::int32_t>& key) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto v : key) {
      h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// Buckets of class indices sharing one smooth part m, keyed by r mod m.
struct SmoothPartBuckets {
  std::uint64_t m = 1;
  std::vector<std::int32_t> dense;                      // m small
  std::unordered_map<std::uint64_t, std::int32_t> sparse;  // m large
  std::int32_t lookup(std::uint64_t residue) const {
    if (!dense.empty()) return dense[residue];
    auto it = sparse.find(residue);
    return it == sparse.end() ? -1 : it->second;
  }
};

constexpr std::uint64_t kDenseLimit = 1 << 16;

Rational sum_over_groups(const Decomposition& d, auto&& per_group) {
  Rational total = 0;
  for (const auto& g : d.groups) {
    Rational v = per_group(g);
    if (v != 0) total += v * to_big(g.count);
  }
  return total / to_big(d.M);
}

double log_alpha(const ResidueSystem& system) {
  double s = 0;
  for (const auto& c : system) s += std::log1p(-1.0 / static_cast<double>(c.modulus()));
  return s;
}

}  // namespace

ResidueSystem Decomposition::subsystem(std::uint64_t h) const {
  ResidueSystem out;
  for (const auto& c : source) {
    auto [smooth, rough] = smooth_split(c.modulus(), Q);
    if (c.residue() % smooth == h % smooth) out.add(rough, static_cast<std::int64_t>(c.residue() % rough));
  }
  return out;
}

std::uint64_t Decomposition::total_pairs() const {
  std::uint64_t t = 0;
  for (const auto& g : groups) t += g.count * g.system.size();
  return t;
}

Decomposition decompose(const ResidueSystem& system, double Q, std::uint64_t guard) {
  if (!(Q >= 2)) throw InputError("decompose requires Q >= 2");
  Decomposition d;
  d.Q = Q;
  d.source = system;

  const std::size_t l = system.size();
  std::vector<std::uint64_t> smooth(l), rough(l);
  for (std::size_t i = 0; i < l; ++i) {
    std::tie(smooth[i], rough[i]) = smooth_split(system[i].modulus(), Q);
    if (rough[i] == 1) d.smooth_subsystem.add(system[i]);
  }
  std::vector<std::uint64_t> parts(smooth);
  std::sort(parts.begin(), parts.end());
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  auto M = lcm_within(parts, guard);
  if (!M) {
    auto g = lcm_guarded(ModuliSet(parts), kLcmGuardCeilingBits);
    throw GuardExceeded("decomposition modulus M",
                        g.value ? g.value->get_str() : "~2^" + std::to_string(g.bit_length),
                        std::to_string(guard));
  }
  d.M = *M;

  // bucket id -> class indices; classes with smooth part 1 are always active.
  std::vector<std::vector<std::uint32_t>> bucket_members;
  std::vector<std::uint32_t> always;
  std::vector<SmoothPartBuckets> tables;
  {
    std::unordered_map<std::uint64_t, std::size_t> table_of;
    for (auto m : parts) {
      if (m == 1) continue;
      table_of[m] = tables.size();
      SmoothPartBuckets t;
      t.m = m;
      if (m <= kDenseLimit) t.dense.assign(m, -1);
      tables.push_back(std::move(t));
    }
    for (std::size_t i = 0; i < l; ++i) {
      if (smooth[i] == 1) {
        always.push_back(static_cast<std::uint32_t>(i));
        continue;
      }
      auto& t = tables[table_of[smooth[i]]];
      std::uint64_t res = system[i].residue() % t.m;
      std::int32_t id = t.lookup(res);
      if (id < 0) {
        id = static_cast<std::int32_t>(bucket_members.size());
        bucket_members.emplace_back();
        if (!t.dense.empty()) t.dense[res] = id; else t.sparse[res] = id;
      }
      bucket_members[id].push_back(static_cast<std::uint32_t>(i));
    }
  }

  // Walk h over [0, M) with running residues h mod m for each smooth part.
  std::unordered_map<std::vector<std::int32_t>, std::size_t, KeyHash> index;
  std::vector<std::vector<std::int32_t>> keys;
  std::vector<std::int32_t> key(tables.size());
  std::vector<std::uint64_t> running(tables.size(), 0);
  for (std::uint64_t h = 0; h < d.M; ++h) {
    for (std::size_t k = 0; k < tables.size(); ++k) key[k] = tables[k].lookup(running[k]);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, d.groups.size()).first;
      keys.push_back(key);
      d.groups.push_back(SubsystemGroup{h, 0, {}});
    }
    ++d.groups[it->second].count;
    for (std::size_t k = 0; k < tables.size(); ++k)
      if (++running[k] == tables[k].m) running[k] = 0;
  }

  for (std::size_t g = 0; g < d.groups.size(); ++g) {
    std::vector<std::uint32_t> members(always);
    for (auto id : keys[g])
      if (id >= 0) members.insert(members.end(), bucket_members[id].begin(), bucket_members[id].end());
    std::sort(members.begin(), members.end());
    auto& sub = d.groups[g].system;
    for (auto i : members)
      sub.add(rough[i], static_cast<std::int64_t>(system[i].residue() % rough[i]));
  }
  return d;
}

double suggest_Q(const ResidueSystem& system) {
  std::uint64_t mx = 0;
  for (const auto& c : system) mx = std::max(mx, c.modulus());
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(mx)));
  while (root > 2 && !is_prime(root)) --root;
  return static_cast<double>(std::max<std::uint64_t>(root, 2));
}

IdentityCheck decomposition_identity(const ResidueSystem& system, double Q, DecompositionGuards guards) {
  IdentityCheck out;
  out.lhs = exact_density(system, guards.scan).value;
  auto d = decompose(system, Q, guards.decomposition);
  out.M = d.M;
  out.rhs = sum_over_groups(d, [&](const SubsystemGroup& g) { return density_auto(g.system, guards.scan).value; });
  out.equal = out.lhs == out.rhs;
  return out;
}

DensityReport density_decomposed(const ResidueSystem& system, double Q, DecompositionGuards guards) {
  auto d = decompose(system, Q, guards.decomposition);
  DensityReport report;
  report.method = DensityMethod::decomposition;
  report.value = sum_over_groups(d, [&](const SubsystemGroup& g) { return density_auto(g.system, guards.scan).value; });
  auto L = lcm_guarded(system.moduli(), kLcmGuardCeilingBits);
  if (L.value) {
    report.period = *L.value;
    report.uncovered_count = report.value.get_num() * (report.period / report.value.get_den());
  } else {
    report.period = report.value.get_den();
    report.uncovered_count = report.value.get_num();
  }
  return report;
}

std::optional<double> coprime_rough_Q(const ResidueSystem& system, std::uint64_t guard) {
  auto moduli = system.moduli().distinct_values();
  if (moduli.empty()) return 2.0;
  const auto top = static_cast<double>(moduli.back());
  std::optional<double> best;
  std::uint64_t best_M = 0;
  for (auto q : primes_in(1, std::max(2.0, std::sqrt(top)))) {
    std::vector<std::uint64_t> rough, smooth;
    for (auto n : moduli) {
      auto [sm, ro] = smooth_split(n, static_cast<double>(q));
      smooth.push_back(sm);
      if (ro > 1) rough.push_back(ro);
    }
    std::sort(rough.begin(), rough.end());
    rough.erase(std::unique(rough.begin(), rough.end()), rough.end());
    bool ok = true;
    for (std::size_t a = 0; ok && a < rough.size(); ++a)
      for (std::size_t b = a + 1; ok && b < rough.size(); ++b) ok = std::gcd(rough[a], rough[b]) == 1;
    if (!ok) continue;
    auto M = lcm_within(smooth, guard);
    if (M && (!best || *M < best_M)) {
      best = static_cast<double>(q);
      best_M = *M;
    }
  }
  return best;
}

DensityReport density_best(const ResidueSystem& system, DecompositionGuards guards) {
  constexpr std::uint64_t kDirectScan = 1 << 24;
  try {
    return density_auto(system, kDirectScan);
  } catch (const GuardExceeded&) {
  }
  auto Q = coprime_rough_Q(system, guards.decomposition);
  if (!Q) return exact_density(system, guards.scan);
  return density_decomposed(system, *Q, guards);
}

AveragedBeta averaged_beta(const ResidueSystem& system, double Q, std::uint64_t guard) {
  auto d = decompose(system, Q, guard);
  AveragedBeta out;
  out.value = sum_over_groups(d, [](const SubsystemGroup& g) { return beta(g.system); });
  if (!system.empty()) {
    auto moduli = system.moduli();
    out.s = moduli.max_multiplicity();
    out.K = static_cast<double>(moduli.max()) / static_cast<double>(moduli.min());
    double lg = std::log(Q * out.K);
    out.approx_shape = static_cast<double>(out.s * out.s) * lg * lg / Q;
  }
  return out;
}

AveragedAlpha averaged_alpha_floor(const ResidueSystem& system, double Q, DecompositionGuards guards) {
  auto d = decompose(system, Q, guards.decomposition);
  AveragedAlpha out;
  out.smooth_density = exact_density(d.smooth_subsystem, guards.scan).value;
  if (out.smooth_density == 0)
    throw SmoothCoverError("the Q-smooth classes cover every integer; no alpha floor exists");
  out.avg_alpha = sum_over_groups(d, [](const SubsystemGroup& g) { return alpha(g.system); });
  double exponent = (1.0 + 1.0 / Q) / to_double(out.smooth_density);
  out.floor = std::exp(exponent * log_alpha(system));
  out.holds = to_double(out.avg_alpha) >= out.floor - 1e-12;
  return out;
}

BoundCertificate positivity_certificate(const ResidueSystem& system, double Q, DecompositionGuards guards,
                                        bool refined) {
  auto d = decompose(system, Q, guards.decomposition);
  BoundCertificate cert;
  cert.kind = BoundKind::decomposed;
  Rational sum_alpha = 0, sum_beta = 0, sum_bound = 0;
  for (const auto& g : d.groups) {
    SubsystemContribution t;
    t.representative_h = g.representative_h;
    t.count = g.count;
    t.alpha = alpha(g.system);
    t.beta = refined ? refined_beta(g.system) : beta(g.system);
    t.bound = t.alpha > t.beta ? Rational(t.alpha - t.beta) : Rational(0);
    BigInt c = to_big(g.count);
    sum_alpha += t.alpha * c;
    sum_beta += t.beta * c;
    sum_bound += t.bound * c;
    cert.terms.push_back(std::move(t));
  }
  BigInt M = to_big(d.M);
  cert.lower_bound = sum_bound / M;
  cert.components["avg_alpha"] = sum_alpha / M;
  cert.components[refined ? "avg_refined_beta" : "avg_beta"] = sum_beta / M;
  cert.components["M"] = Rational(M);
  cert.components["smooth_classes"] = Rational(static_cast<unsigned long>(d.smooth_subsystem.size()));
  return cert;
}

}  // namespace covsys
