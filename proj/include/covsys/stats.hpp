#pragma once

// Moments of the uncovered density over random residue systems: each
// modulus n of T independently gets a uniform residue in [0, n).

#include <cstdint>
#include <string_view>
#include <vector>

#include "covsys/arith.hpp"
#include "covsys/core.hpp"
#include "covsys/decompose.hpp"

namespace covsys {

enum class MomentMethod { enumeration, pair_formula, monte_carlo };
std::string_view to_string(MomentMethod m) noexcept;

struct MomentReport {
  Rational mean;
  Rational second_moment;
  Rational variance;  // second_moment - mean^2
  MomentMethod method = MomentMethod::enumeration;
  std::uint64_t sample_count = 0;  // monte carlo only
  double standard_error = 0;       // of the mean; monte carlo only
  double bound_ratio = 0;          // variance / (alpha^2 log N / N^2), N = min T
};

/// prod (1 - 1/n) over T with multiplicity.
Rational expected_delta(const ModuliSet& T);

/// W(T) = prod n with multiplicity.
BigInt system_count(const ModuliSet& T);

/// alpha^2 log N / N^2 with N = min T.
double variance_scale(const ModuliSet& T);

inline constexpr std::uint64_t kDefaultEnumerationGuard = 1'000'000;
inline constexpr std::uint64_t kDefaultPairGuard = 1 << 20;

/// Every system in the family, exact densities. Requires W(T) <= guard.
MomentReport enumerate_moments(const ModuliSet& T, std::uint64_t guard = kDefaultEnumerationGuard);

/// Second moment from the subset expansion
///   E[delta^2] = prod_{n in T} (1 - 2/n) * sum_{S subset T} 1 / (M(S) L(S))
/// with M(S) = prod_{n in S} (n - 2) and L(S) = lcm(S). Distinct moduli >= 3.
MomentReport pair_formula_moments(const ModuliSet& T, std::uint64_t guard = kDefaultPairGuard);

/// Seeded Monte Carlo with exact per-sample densities. Trial t draws from
/// its own stream derived from (seed, t).
MomentReport sample_moments(const ModuliSet& T, std::uint64_t trials, std::uint64_t seed,
                            DecompositionGuards guards = {});

/// The residues drawn for trial t, in ascending modulus order.
ResidueSystem sample_system(const ModuliSet& T, std::uint64_t seed, std::uint64_t trial);

struct VarianceRow {
  ModuliSet T;
  Rational variance;
  double scale = 0;
  double ratio = 0;
  MomentMethod method = MomentMethod::enumeration;
};

struct VarianceScan {
  std::vector<VarianceRow> rows;
  double max_ratio = 0;
};

/// Pair formula where it applies, enumeration otherwise.
VarianceScan variance_bound_scan(const std::vector<ModuliSet>& family,
                                 std::uint64_t enumeration_guard = kDefaultEnumerationGuard,
                                 std::uint64_t pair_guard = kDefaultPairGuard);

}  // namespace covsys
