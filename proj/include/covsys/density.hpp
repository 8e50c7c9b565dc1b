#pragma once

// Exact uncovered density of a residue system and the questions built on
// it: exact-cover verification, extremal densities for a moduli set, and
// the smallest uncovered integer.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "covsys/arith.hpp"
#include "covsys/core.hpp"

namespace covsys {

/// Default ceiling on the number of residues a sieve scan may touch.
inline constexpr std::uint64_t kDefaultScanGuard = 1'000'000'000;

enum class DensityMethod { lcm_scan, coprime_product, decomposition };

std::string_view to_string(DensityMethod m) noexcept;

struct DensityReport {
  Rational value;          // uncovered_count / period, reduced
  BigInt period;           // modulus over which the count was taken
  DensityMethod method = DensityMethod::lcm_scan;
  BigInt uncovered_count;  // uncovered residues in [0, period)
};

/// Sieve over [0, lcm). Throws GuardExceeded when lcm > guard.
DensityReport exact_density(const ResidueSystem& system,
                            std::uint64_t guard = kDefaultScanGuard);

/// Uses the product formula when the distinct moduli are pairwise coprime
/// (classes sharing a modulus are merged), otherwise falls back to a scan.
DensityReport density_auto(const ResidueSystem& system,
                           std::uint64_t guard = kDefaultScanGuard);

class NotCoprimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Product of (1 - 1/n_i); requires pairwise coprime moduli.
Rational density_coprime(const ResidueSystem& system);

/// True iff the two classes share no integer.
bool classes_disjoint(const ResidueClass& a, const ResidueClass& b);

struct ExactCoverVerdict {
  bool exact = false;
  Rational reciprocal_sum;
  /// Smallest index pair (i < j) whose classes intersect, if any.
  std::optional<std::pair<std::size_t, std::size_t>> overlapping_pair;
  /// 1 - reciprocal_sum (nonzero means the densities do not add up).
  Rational deficit;
  std::string violation;  // empty when exact
};

/// Exact cover test by disjointness plus sum of 1/n = 1; no period scan.
ExactCoverVerdict is_exact_cover(const ResidueSystem& system);

/// Density of integers divisible by no member of `moduli` (the residue-0
/// choice, which is the maximum). Inclusion-exclusion for up to 25
/// primitive moduli, guarded by `guard` terms; sieve above that.
Rational delta_plus(const ModuliSet& moduli, std::uint64_t guard = kDefaultScanGuard);

enum class DeltaMinusMode { exhaustive, greedy };

struct DeltaMinusResult {
  DeltaMinusMode mode = DeltaMinusMode::exhaustive;
  Rational value;          // exact minimum (exhaustive) or achieved (greedy)
  ResidueSystem witness;   // classes in ascending modulus order
  Rational alpha;          // product of (1 - 1/n), the peeling bound
  Rational reciprocal_sum;
};

/// Exhaustive mode requires prod(n) <= guard; greedy requires lcm <= guard.
DeltaMinusResult delta_minus(const ModuliSet& moduli, DeltaMinusMode mode,
                             std::uint64_t guard = kDefaultScanGuard);

/// Smallest nonnegative uncovered integer, or nullopt when the system covers.
std::optional<std::uint64_t> uncovered_witness(const ResidueSystem& system,
                                               std::uint64_t guard = kDefaultScanGuard);

}  // namespace covsys
