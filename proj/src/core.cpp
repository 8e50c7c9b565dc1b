#include "covsys/core.hpp"

#include <algorithm>
#include <string>

namespace covsys {

ResidueClass::ResidueClass(std::uint64_t modulus, std::int64_t residue)
    : modulus_(modulus), residue_(0) {
  if (modulus == 0) throw InputError("residue class with modulus 0");
  residue_ = reduce_mod(residue, modulus);
}

bool ResidueClass::contains(const BigInt& x) const {
  BigInt m = to_big(modulus_);
  BigInt r = x % m;
  if (sgn(r) < 0) r += m;
  return r == to_big(residue_);
}

ModuliSet::ModuliSet(std::span<const std::uint64_t> moduli) {
  for (auto n : moduli) add(n);
}

ModuliSet::ModuliSet(std::initializer_list<std::uint64_t> moduli) {
  for (auto n : moduli) add(n);
}

void ModuliSet::add(std::uint64_t modulus, std::uint64_t count) {
  if (modulus == 0) throw InputError("modulus 0 in moduli set");
  if (count == 0) return;
  counts_[modulus] += count;
}

std::vector<std::uint64_t> ModuliSet::expanded() const {
  std::vector<std::uint64_t> out;
  out.reserve(size());
  for (auto [n, k] : counts_) out.insert(out.end(), k, n);
  return out;
}

std::vector<std::uint64_t> ModuliSet::distinct_values() const {
  std::vector<std::uint64_t> out;
  out.reserve(counts_.size());
  for (auto [n, k] : counts_) out.push_back(n);
  return out;
}

bool ModuliSet::distinct() const noexcept {
  return std::all_of(counts_.begin(), counts_.end(), [](auto& e) { return e.second == 1; });
}

std::size_t ModuliSet::size() const noexcept {
  std::size_t s = 0;
  for (auto& e : counts_) s += e.second;
  return s;
}

std::uint64_t ModuliSet::max_multiplicity() const noexcept {
  std::uint64_t m = 0;
  for (auto& e : counts_) m = std::max(m, e.second);
  return m;
}

std::uint64_t ModuliSet::min() const {
  if (counts_.empty()) throw InputError("min of empty moduli set");
  return counts_.begin()->first;
}

std::uint64_t ModuliSet::max() const {
  if (counts_.empty()) throw InputError("max of empty moduli set");
  return counts_.rbegin()->first;
}

ResidueSystem::ResidueSystem(std::initializer_list<std::pair<std::uint64_t, std::int64_t>> pairs) {
  classes_.reserve(pairs.size());
  for (auto [n, r] : pairs) classes_.emplace_back(n, r);
}

ModuliSet ResidueSystem::moduli() const {
  ModuliSet s;
  for (auto& c : classes_) s.add(c.modulus());
  return s;
}

std::uint64_t ResidueSystem::max_multiplicity() const { return moduli().max_multiplicity(); }

Rational ResidueSystem::reciprocal_sum() const {
  // Common denominator keeps this linear in the number of classes.
  std::map<std::uint64_t, std::uint64_t> counts = moduli().counts();
  Rational total = 0;
  for (auto [n, k] : counts) total += make_rational(static_cast<std::int64_t>(k), n);
  return total;
}

bool ResidueSystem::uncovered(std::uint64_t x) const noexcept {
  return std::none_of(classes_.begin(), classes_.end(),
                      [x](const ResidueClass& c) { return c.contains(x); });
}

bool ResidueSystem::uncovered(const BigInt& x) const {
  return std::none_of(classes_.begin(), classes_.end(),
                      [&x](const ResidueClass& c) { return c.contains(x); });
}

ResidueSystem ResidueSystem::shifted(std::int64_t t) const {
  ResidueSystem out;
  out.classes_.reserve(classes_.size());
  for (auto& c : classes_) {
    std::uint64_t n = c.modulus();
    std::uint64_t r = (c.residue() + reduce_mod(t, n)) % n;
    out.classes_.emplace_back(n, static_cast<std::int64_t>(r));
  }
  return out;
}

std::uint64_t Factorization::largest_prime() const noexcept {
  return factors_.empty() ? 0 : factors_.back().prime;
}

std::optional<std::uint64_t> Factorization::smallest_prime() const noexcept {
  if (factors_.empty()) return std::nullopt;
  return factors_.front().prime;
}

std::uint64_t Factorization::value() const {
  std::uint64_t v = 1;
  for (auto& pp : factors_)
    for (unsigned i = 0; i < pp.exponent; ++i) v *= pp.prime;
  return v;
}

std::pair<std::uint64_t, std::uint64_t> smooth_split(std::uint64_t n, double Q) {
  if (n == 0) throw InputError("smooth_split of 0");
  std::uint64_t smooth = 1;
  for (auto& pp : factorize(n).factors()) {
    if (static_cast<double>(pp.prime) > Q) continue;
    for (unsigned i = 0; i < pp.exponent; ++i) smooth *= pp.prime;
  }
  return {smooth, n / smooth};
}

GuardedLcm lcm_guarded(const ModuliSet& moduli, std::size_t guard_bits) {
  guard_bits = std::min(guard_bits, kLcmGuardCeilingBits);
  BigInt acc = 1;
  for (auto n : moduli.distinct_values()) {
    BigInt nb = to_big(n);
    mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), nb.get_mpz_t());
    std::size_t bits = bit_length(acc);
    if (bits > guard_bits) return GuardedLcm{std::nullopt, bits};
  }
  return GuardedLcm{acc, bit_length(acc)};
}

std::optional<std::uint64_t> lcm_within(std::span<const std::uint64_t> moduli,
                                        std::uint64_t ceiling) {
  std::uint64_t acc = 1;
  for (auto n : moduli) {
    auto next = lcm_bounded(acc, n, ceiling);
    if (!next) return std::nullopt;
    acc = *next;
  }
  return acc;
}

std::optional<std::uint64_t> lcm_within(const ResidueSystem& system, std::uint64_t ceiling) {
  std::vector<std::uint64_t> moduli = system.moduli().distinct_values();
  return lcm_within(moduli, ceiling);
}

}  // namespace covsys
