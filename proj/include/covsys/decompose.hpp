#pragma once

// Smooth-part decomposition of a residue system.
//
// With M = lcm of the Q-smooth parts of the moduli, each residue class
// h mod M induces the subsystem
//     C_h = { (rough(n), r) : (n, r) in C, r = h (mod smooth(n)) },
// whose moduli are coprime to M, and delta(C) is the average of
// delta(C_h) over h. Many h share the same C_h, so subsystems are kept
// grouped with their multiplicities.

#include <cstdint>
#include <optional>
#include <vector>

#include "covsys/arith.hpp"
#include "covsys/bounds.hpp"
#include "covsys/core.hpp"
#include "covsys/density.hpp"

namespace covsys {

inline constexpr std::uint64_t kDefaultDecompositionGuard = 20'000'000;

struct SubsystemGroup {
  std::uint64_t representative_h = 0;  // smallest h with this subsystem
  std::uint64_t count = 0;             // number of h in [0, M) sharing it
  ResidueSystem system;
};

struct Decomposition {
  double Q = 2;
  std::uint64_t M = 1;
  std::vector<SubsystemGroup> groups;  // ordered by representative_h
  ResidueSystem smooth_subsystem;      // classes with P(n) <= Q

  ResidueSystem source;                // the decomposed system

  /// C_h for one h, straight from the membership rule.
  ResidueSystem subsystem(std::uint64_t h) const;
  std::uint64_t total_pairs() const;  // sum over h of |C_h|
};

/// Throws GuardExceeded when M > guard.
Decomposition decompose(const ResidueSystem& system, double Q,
                        std::uint64_t guard = kDefaultDecompositionGuard);

/// Largest prime <= sqrt(max modulus), at least 2.
double suggest_Q(const ResidueSystem& system);

struct DecompositionGuards {
  std::uint64_t decomposition = kDefaultDecompositionGuard;  // on M
  std::uint64_t scan = kDefaultScanGuard;                    // per density scan
};

struct IdentityCheck {
  Rational lhs;  // delta(C) by direct scan
  Rational rhs;  // (1/M) sum delta(C_h)
  bool equal = false;
  std::uint64_t M = 1;
};

IdentityCheck decomposition_identity(const ResidueSystem& system, double Q,
                                     DecompositionGuards guards = {});

/// delta(C) computed as the average of delta(C_h).
DensityReport density_decomposed(const ResidueSystem& system, double Q,
                                 DecompositionGuards guards = {});

/// Smallest prime Q for which every rough part is 1 or coprime-or-equal to
/// every other, minimizing M among those; nullopt when no such Q keeps
/// M <= guard.
std::optional<double> coprime_rough_Q(const ResidueSystem& system,
                                      std::uint64_t guard = kDefaultDecompositionGuard);

/// Exact density by the cheapest available route: product formula,
/// direct scan when the period is small, else decomposition with
/// coprime_rough_Q.
DensityReport density_best(const ResidueSystem& system, DecompositionGuards guards = {});

struct AveragedBeta {
  Rational value;          // (1/M) sum beta(C_h)
  double approx_shape = 0; // s^2 log^2(QK) / Q with constant 1
  std::uint64_t s = 0;     // max multiplicity
  double K = 1;            // max modulus / min modulus
};

AveragedBeta averaged_beta(const ResidueSystem& system, double Q,
                           std::uint64_t guard = kDefaultDecompositionGuard);

/// Raised when the smooth subsystem already covers every integer.
class SmoothCoverError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct AveragedAlpha {
  Rational avg_alpha;        // (1/M) sum alpha(C_h)
  Rational smooth_density;   // delta(C')
  double floor = 0;          // alpha(C)^((1 + 1/Q) / delta(C'))
  bool holds = false;        // avg_alpha >= floor - 1e-12
};

AveragedAlpha averaged_alpha_floor(const ResidueSystem& system, double Q,
                                   DecompositionGuards guards = {});

/// (1/M) sum max(0, alpha(C_h) - beta(C_h)), a sound lower bound on
/// delta(C). With refined = true each term uses the refined pair sum.
BoundCertificate positivity_certificate(const ResidueSystem& system, double Q,
                                        DecompositionGuards guards = {}, bool refined = false);

}  // namespace covsys
