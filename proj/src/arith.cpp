#include "covsys/arith.hpp"

#include <limits>

namespace covsys {

GuardExceeded::GuardExceeded(std::string what_guard, std::string needed,
                             std::string limit)
    : std::runtime_error("guard exceeded: " + what_guard + " needs " + needed +
                         ", limit " + limit),
      guard_(std::move(what_guard)),
      needed_(std::move(needed)),
      limit_(std::move(limit)) {}

Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InputError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(std::int64_t num, std::uint64_t den) {
  BigInt n;
  if (num >= 0) {
    n = to_big(static_cast<std::uint64_t>(num));
  } else {
    n = to_big(static_cast<std::uint64_t>(-(num + 1)));
    n += 1;
    n = -n;
  }
  return make_rational(n, to_big(den));
}

std::optional<std::uint64_t> to_u64(const BigInt& v) {
  if (sgn(v) < 0) return std::nullopt;
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > 64) return std::nullopt;
  std::uint64_t out = 0;
  std::size_t count = 0;
  mpz_export(&out, &count, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return count == 0 ? 0 : out;
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const BigInt& v) { return v.get_str(); }

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    return make_rational(BigInt(text.substr(0, slash)),
                         BigInt(text.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw InputError("not a rational: '" + text + "'");
  }
}

double to_double(const Rational& q) { return q.get_d(); }

std::size_t bit_length(const BigInt& v) {
  if (v == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

std::optional<std::uint64_t> mul_bounded(std::uint64_t a, std::uint64_t b,
                                         std::uint64_t ceiling) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  if (p > ceiling) return std::nullopt;
  return static_cast<std::uint64_t>(p);
}

std::optional<std::uint64_t> lcm_bounded(std::uint64_t a, std::uint64_t b,
                                         std::uint64_t ceiling) {
  if (a == 0 || b == 0) return 0;
  return mul_bounded(a / std::gcd(a, b), b, ceiling);
}

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  // Extended Euclid on signed 128-bit to stay clear of overflow.
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw InternalError("inverse_mod: arguments not coprime");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

BigInt crt_pair(const BigInt& a1, const BigInt& m1, std::uint64_t a2,
                std::uint64_t m2) {
  // x = a1 + m1 * k, with k = (a2 - a1) * m1^{-1} mod m2.
  BigInt m2b = to_big(m2);
  BigInt m1_mod = m1 % m2b;
  BigInt a1_mod = a1 % m2b;
  std::uint64_t inv = inverse_mod(to_u64(m1_mod).value(), m2);
  BigInt diff = (to_big(a2) - a1_mod) % m2b;
  if (sgn(diff) < 0) diff += m2b;
  BigInt k = (diff * to_big(inv)) % m2b;
  BigInt x = a1 + m1 * k;
  BigInt mod = m1 * m2b;
  x %= mod;
  if (sgn(x) < 0) x += mod;
  return x;
}

}  // namespace covsys
