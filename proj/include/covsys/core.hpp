#pragma once

// Residue-system data model and the integer foundations it rests on:
// factorization, smooth/rough splitting, prime ranges and guarded lcms.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "covsys/arith.hpp"

namespace covsys {

/// One congruence class r (mod n), stored with 0 <= r < n.
class ResidueClass {
 public:
  ResidueClass(std::uint64_t modulus, std::int64_t residue);

  std::uint64_t modulus() const noexcept { return modulus_; }
  std::uint64_t residue() const noexcept { return residue_; }

  bool contains(std::uint64_t x) const noexcept { return x % modulus_ == residue_; }
  bool contains(const BigInt& x) const;

  friend auto operator<=>(const ResidueClass&, const ResidueClass&) = default;

 private:
  static ResidueClass reduced(std::uint64_t modulus, std::uint64_t residue);
  std::uint64_t modulus_;
  std::uint64_t residue_;
};

/// Multiset of moduli with multiplicities.
class ModuliSet {
 public:
  ModuliSet() = default;
  explicit ModuliSet(std::span<const std::uint64_t> moduli);
  ModuliSet(std::initializer_list<std::uint64_t> moduli);

  void add(std::uint64_t modulus, std::uint64_t count = 1);

  const std::map<std::uint64_t, std::uint64_t>& counts() const noexcept { return counts_; }
  /// Every modulus repeated by its multiplicity, ascending.
  std::vector<std::uint64_t> expanded() const;
  std::vector<std::uint64_t> distinct_values() const;

  bool distinct() const noexcept;
  bool empty() const noexcept { return counts_.empty(); }
  std::size_t size() const noexcept;  // with multiplicity
  std::uint64_t max_multiplicity() const noexcept;
  std::uint64_t min() const;
  std::uint64_t max() const;

  friend bool operator==(const ModuliSet&, const ModuliSet&) = default;

 private:
  std::map<std::uint64_t, std::uint64_t> counts_;
};

/// Ordered multiset of residue classes. Order is significant for the
/// refined pair bound, so it is preserved everywhere.
class ResidueSystem {
 public:
  ResidueSystem() = default;
  explicit ResidueSystem(std::vector<ResidueClass> classes) : classes_(std::move(classes)) {}
  ResidueSystem(std::initializer_list<std::pair<std::uint64_t, std::int64_t>> pairs);

  void add(ResidueClass c) { classes_.push_back(c); }
  void add(std::uint64_t modulus, std::int64_t residue) { classes_.emplace_back(modulus, residue); }

  const std::vector<ResidueClass>& classes() const noexcept { return classes_; }
  std::size_t size() const noexcept { return classes_.size(); }
  bool empty() const noexcept { return classes_.empty(); }
  const ResidueClass& operator[](std::size_t i) const { return classes_[i]; }
  auto begin() const noexcept { return classes_.begin(); }
  auto end() const noexcept { return classes_.end(); }

  ModuliSet moduli() const;
  std::uint64_t max_multiplicity() const;
  Rational reciprocal_sum() const;

  /// True if x lies in no class of the system.
  bool uncovered(std::uint64_t x) const noexcept;
  bool uncovered(const BigInt& x) const;

  /// Same residues shifted by t (translation of the whole system).
  ResidueSystem shifted(std::int64_t t) const;

  friend bool operator==(const ResidueSystem&, const ResidueSystem&) = default;

 private:
  std::vector<ResidueClass> classes_;
};

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization with primes strictly increasing.
class Factorization {
 public:
  Factorization() = default;
  explicit Factorization(std::vector<PrimePower> factors) : factors_(std::move(factors)) {}

  const std::vector<PrimePower>& factors() const& noexcept { return factors_; }
  // By value on temporaries, so `for (auto f : factorize(n).factors())` is safe.
  std::vector<PrimePower> factors() && noexcept { return std::move(factors_); }
  bool empty() const noexcept { return factors_.empty(); }

  /// P(n); 0 for n = 1.
  std::uint64_t largest_prime() const noexcept;
  /// P^-(n); nullopt stands for +infinity (n = 1).
  std::optional<std::uint64_t> smallest_prime() const noexcept;
  std::uint64_t value() const;

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  std::vector<PrimePower> factors_;
};

Factorization factorize(std::uint64_t n);

bool is_prime(std::uint64_t n);

/// (largest Q-smooth divisor of n, n divided by it).
std::pair<std::uint64_t, std::uint64_t> smooth_split(std::uint64_t n, double Q);

/// Calls visit(p) for every prime a < p <= b in increasing order. The
/// sieve is segmented, so ranges up to ~10^10 need no large allocation.
void for_each_prime(double a, double b, const std::function<void(std::uint64_t)>& visit);

std::vector<std::uint64_t> primes_in(double a, double b);

inline constexpr std::size_t kDefaultLcmGuardBits = 64;
inline constexpr std::size_t kLcmGuardCeilingBits = 1'000'000;

/// Either the exact lcm, or the guard-exceeded signal with a bit-length
/// estimate of where the computation stopped.
struct GuardedLcm {
  std::optional<BigInt> value;
  std::size_t bit_length = 0;
  bool exceeded() const noexcept { return !value.has_value(); }
};

GuardedLcm lcm_guarded(const ModuliSet& moduli, std::size_t guard_bits = kDefaultLcmGuardBits);

/// lcm of the given moduli as a uint64 when it is <= ceiling.
std::optional<std::uint64_t> lcm_within(std::span<const std::uint64_t> moduli,
                                        std::uint64_t ceiling);
std::optional<std::uint64_t> lcm_within(const ResidueSystem& system, std::uint64_t ceiling);

}  // namespace covsys
