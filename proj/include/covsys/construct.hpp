#pragma once

// Explicit constructions: the randomized-then-greedy near cover on an
// interval of moduli, the exact covering systems C_J with squarefree
// moduli, Haight modulus sets, and the smooth-part witness extension.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covsys/arith.hpp"
#include "covsys/core.hpp"

namespace covsys {

// ---- greedy near cover -------------------------------------------------

enum class GreedyPhase { random, greedy };
std::string_view to_string(GreedyPhase p) noexcept;

struct GreedyStep {
  std::uint64_t j = 0;
  GreedyPhase phase = GreedyPhase::random;
  std::vector<std::uint64_t> D;  // divisors of j in (N, 2N]; greedy phase only
  std::uint64_t f = 0;           // admissible classes mod j; greedy phase only
  std::uint64_t r = 0;
  std::uint64_t uncovered_before = 0;
  std::uint64_t uncovered_after = 0;
};

struct GreedyTrace {
  std::uint64_t N = 0;
  std::uint64_t K = 0;
  std::uint64_t window = 0;
  std::uint64_t seed = 0;
  bool exact_period = false;  // window is a multiple of every modulus used
  std::vector<GreedyStep> steps;
  ResidueSystem final_system;
  Rational final_uncovered_fraction;  // uncovered / window
};

struct GreedyOptions {
  std::uint64_t seed = 0;
  std::uint64_t window = 0;  // 0 selects 10 K N
};

/// Random residues on (N, 2N], then greedy on (2N, KN] restricted to the
/// classes avoiding r(d) mod d for the divisors d of j in (N, 2N].
GreedyTrace greedy_cover(std::uint64_t N, std::uint64_t K, GreedyOptions options = {});

/// lcm(N+1, ..., KN) when it is <= ceiling; a window this wide makes the
/// trace exact.
std::optional<std::uint64_t> greedy_exact_window(std::uint64_t N, std::uint64_t K,
                                                 std::uint64_t ceiling);

/// Checks every greedy step against after <= (1 - 1/f) before and
/// after <= (1 - 1/j) before, allowing one class of slack when j does not
/// divide the window. Also checks that the counts never increase.
bool greedy_step_invariant(const GreedyTrace& trace);

/// Uniform draw on [0, n) from a 64-bit seed, by rejection.
std::uint64_t uniform_below(std::uint64_t n, std::uint64_t& state);
std::uint64_t splitmix64(std::uint64_t& state);

// ---- exact covers C_J --------------------------------------------------

enum class XSchedule { standard, minimal };
std::string_view to_string(XSchedule s) noexcept;

/// X_j = (j+1)^(j+1) in the standard schedule; in the minimal schedule
/// X_0 = 1 and X_j is the least X with sum_{X_{j-1} < p <= X} [X/p] >= X_{j-1}.
std::vector<std::uint64_t> x_schedule(unsigned J, XSchedule schedule);

struct ExactCoverPlan {
  unsigned J = 1;
  XSchedule schedule = XSchedule::standard;
  std::vector<std::uint64_t> X;                        // X_0 .. X_J
  std::vector<std::vector<std::uint64_t>> prime_blocks;  // P_1 .. P_J
  BigInt N_J;                                          // prod_{j < J} X_j
  ResidueSystem system;
};

inline constexpr std::uint64_t kDefaultConstructGuard = 2'000'000;  // classes

/// Throws GuardExceeded when the class count would pass `guard`, and
/// InternalError if some modulus runs out of primes.
ExactCoverPlan exact_cover_construct(unsigned J, XSchedule schedule = XSchedule::standard,
                                     std::uint64_t guard = kDefaultConstructGuard);

struct XineqResult {
  std::uint64_t lhs = 0;
  std::uint64_t rhs = 0;
  bool holds = false;
};

inline constexpr std::uint64_t kXineqSieveLimit = 1'000'000'000;

/// Evaluates sum_{X_{j-1} < p <= X_j} [X_j / p] against X_{j-1}.
XineqResult xineq_check(unsigned j);

// ---- Haight modulus sets -----------------------------------------------

struct HaightReport {
  std::uint64_t N = 0;
  double threshold = 0;  // e^{sqrt(log N)} log N
  std::vector<std::uint64_t> primes;
  Rational sigma_ratio;  // sigma(H)/H
  // Present only for the full divisor set.
  std::uint64_t divisor_count = 0;  // moduli d | H, d > 1
  long double log_alpha = 0;
  long double alpha = 0;
  std::optional<Rational> alpha_exact;
  std::optional<Rational> beta;         // beta over all divisor pairs
  std::optional<Rational> beta_stage1;  // sum_{d>1} (sum_{d | d1 | H} 1/d1)^2
  std::optional<Rational> beta_stage2;  // (sum_{d>1} 1/d^2) (sigma(H)/H)^2
};

inline constexpr std::uint64_t kDefaultHaightGuard = 1 << 20;       // divisors
inline constexpr std::uint64_t kDefaultHaightExactGuard = 1 << 14;  // exact alpha

/// Primes in (e^{sqrt(log N)} log N, N] and the divisor statistics of
/// their product H.
HaightReport haight_moduli(std::uint64_t N, bool full_divisor_set,
                           std::uint64_t guard = kDefaultHaightGuard,
                           std::uint64_t exact_guard = kDefaultHaightExactGuard);

// ---- witness extension -------------------------------------------------

struct WitnessExtension {
  BigInt A;             // smallest nonnegative solution, verified uncovered
  std::uint64_t a = 0;  // uncovered residue of C_0 mod L
  BigInt L;             // lcm of the moduli of C_0
  double cutoff = 0;    // sqrt(s B)
  std::size_t smooth_classes = 0;
  std::map<std::uint64_t, std::uint64_t> b;  // large prime p -> b(p)
};

/// Extends an uncovered class of C_0 = {(n, r) : P(n) <= sqrt(sB)} to an
/// integer avoiding all of C. Throws SmoothCoverError when C_0 covers.
WitnessExtension extend_witness(const ResidueSystem& system, std::uint64_t B, std::uint64_t s);

}  // namespace covsys
