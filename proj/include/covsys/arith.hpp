#pragma once

// Exact integer and rational arithmetic shared by every covsys module.
//
// BigInt and Rational are thin aliases over GMP's C++ classes. mpq_class
// keeps itself canonical under arithmetic; values built from a raw
// numerator/denominator pair must go through make_rational().

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace covsys {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Raised when a computation would exceed a caller-supplied size guard.
/// Callers are expected to catch it and fall back to a cheaper method.
class GuardExceeded : public std::runtime_error {
 public:
  GuardExceeded(std::string what_guard, std::string needed, std::string limit);

  const std::string& guard() const noexcept { return guard_; }
  const std::string& needed() const noexcept { return needed_; }
  const std::string& limit() const noexcept { return limit_; }

 private:
  std::string guard_;
  std::string needed_;
  std::string limit_;
};

/// Malformed input (bad modulus, violated precondition on user data).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A check that must never fail did fail.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

Rational make_rational(const BigInt& num, const BigInt& den);
Rational make_rational(std::int64_t num, std::uint64_t den);

inline BigInt to_big(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

/// Value as uint64 when it fits, nullopt otherwise (or when negative).
std::optional<std::uint64_t> to_u64(const BigInt& v);

/// "p/q" with q > 0, always including the denominator ("0/1", "3/1").
std::string to_string(const Rational& q);
std::string to_string(const BigInt& v);

/// Parses "p/q" or "p".
Rational parse_rational(const std::string& text);

double to_double(const Rational& q);

/// Bit length of |v| (0 for v = 0).
std::size_t bit_length(const BigInt& v);

/// Overflow-checked a*b; nullopt when the product exceeds `ceiling`.
std::optional<std::uint64_t> mul_bounded(std::uint64_t a, std::uint64_t b,
                                         std::uint64_t ceiling);

/// Overflow-checked lcm(a, b); nullopt when the result exceeds `ceiling`.
std::optional<std::uint64_t> lcm_bounded(std::uint64_t a, std::uint64_t b,
                                         std::uint64_t ceiling);

/// r mod n reduced into [0, n) for signed r.
inline std::uint64_t reduce_mod(std::int64_t r, std::uint64_t n) {
  if (r >= 0) return static_cast<std::uint64_t>(r) % n;
  // -(r+1) avoids overflow on INT64_MIN.
  std::uint64_t m = static_cast<std::uint64_t>(-(r + 1)) % n;
  return n - 1 - m;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

/// Modular inverse of a mod m; requires gcd(a, m) = 1 and m >= 1.
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m);

/// Smallest nonnegative x with x = a1 (mod m1) and x = a2 (mod m2), m1, m2
/// coprime. Result is reduced mod m1*m2.
BigInt crt_pair(const BigInt& a1, const BigInt& m1, std::uint64_t a2,
                std::uint64_t m2);

}  // namespace covsys
