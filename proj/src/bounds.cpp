#include "covsys/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace covsys {

namespace {

Rational one_minus_inverse(std::uint64_t n) {
  return make_rational(static_cast<std::int64_t>(n - 1), n);
}

}  // namespace

Rational alpha(const ModuliSet& moduli) {
  BigInt num = 1, den = 1;
  for (auto [n, k] : moduli.counts()) {
    BigInt a = to_big(n - 1), b = to_big(n);
    for (std::uint64_t i = 0; i < k; ++i) {
      num *= a;
      den *= b;
    }
  }
  return make_rational(num, den);
}

Rational alpha(const ResidueSystem& system) { return alpha(system.moduli()); }

Rational beta(const ResidueSystem& system) {
  // Grouped by modulus: equal moduli n > 1 contribute C(k, 2) / n^2,
  // distinct dependent moduli contribute k k' / (n n').
  const auto counts = system.moduli().counts();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> groups(counts.begin(), counts.end());
  Rational total = 0;
  for (std::size_t a = 0; a < groups.size(); ++a) {
    auto [n, k] = groups[a];
    if (n > 1 && k > 1) {
      BigInt nn = to_big(n);
      total += make_rational(to_big(k) * to_big(k - 1) / 2, nn * nn);
    }
    for (std::size_t b = a + 1; b < groups.size(); ++b) {
      auto [m, j] = groups[b];
      if (std::gcd(n, m) == 1) continue;
      total += make_rational(to_big(k) * to_big(j), to_big(n) * to_big(m));
    }
  }
  return total;
}

Rational refined_beta(const ResidueSystem& system) {
  const auto& cls = system.classes();
  const std::size_t l = cls.size();
  // tail[j] = prod_{u > j} (1 - 1/n_u)
  std::vector<Rational> tail(l + 1, Rational(1));
  for (std::size_t j = l; j-- > 0;) {
    tail[j] = j + 1 < l ? tail[j + 1] * one_minus_inverse(cls[j + 1].modulus()) : Rational(1);
  }
  Rational total = 0;
  for (std::size_t j = 1; j < l; ++j) {
    std::uint64_t nj = cls[j].modulus();
    Rational inner = 0;
    for (std::size_t i = 0; i < j; ++i)
      if (std::gcd(cls[i].modulus(), nj) > 1) inner += make_rational(1, cls[i].modulus());
    if (inner != 0) total += inner * make_rational(1, nj) * tail[j];
  }
  return total;
}

std::string_view to_string(BoundKind k) noexcept {
  switch (k) {
    case BoundKind::lemma1: return "lemma1";
    case BoundKind::lemma1_refined: return "lemma1-refined";
    case BoundKind::decomposed: return "decomposed";
  }
  return "?";
}

std::string_view to_string(Conclusion c) noexcept {
  return c == Conclusion::positive ? "positive" : "inconclusive";
}

BoundCertificate lemma1_bound(const ResidueSystem& system, Lemma1Options options) {
  BoundCertificate cert;
  Rational a = alpha(system);
  cert.components["alpha"] = a;
  if (!options.refined) {
    Rational b = beta(system);
    cert.kind = BoundKind::lemma1;
    cert.components["beta"] = b;
    cert.lower_bound = a - b;
    return cert;
  }
  cert.kind = BoundKind::lemma1_refined;
  Rational rb;
  if (options.sort_descending) {
    std::vector<ResidueClass> sorted(system.begin(), system.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ResidueClass& x, const ResidueClass& y) { return x.modulus() > y.modulus(); });
    rb = refined_beta(ResidueSystem(std::move(sorted)));
  } else {
    rb = refined_beta(system);
  }
  cert.components["refined_beta"] = rb;
  cert.lower_bound = a - rb;
  return cert;
}

SmoothTail smooth_tail_sum(std::uint64_t N, double Q) {
  if (!(Q >= 2)) throw InputError("smooth_tail_sum requires Q >= 2");
  if (N == 0) throw InputError("smooth_tail_sum requires N >= 1");
  auto primes = primes_in(1, Q);

  SmoothTail out;
  BigInt num = 1, den = 1;
  for (auto p : primes) {
    num *= to_big(p);
    den *= to_big(p - 1);
  }
  out.euler_product = make_rational(num, den);

  // Enumerate Q-smooth n <= N by depth-first extension with primes in
  // nondecreasing order; sum 1/n over a common denominator in chunks.
  std::vector<std::uint64_t> smooth;
  auto dfs = [&](auto&& self, std::size_t i, std::uint64_t value) -> void {
    smooth.push_back(value);
    for (std::size_t k = i; k < primes.size(); ++k) {
      auto next = mul_bounded(value, primes[k], N);
      if (!next) break;
      self(self, k, *next);
    }
  };
  dfs(dfs, 0, 1);
  std::sort(smooth.begin(), smooth.end());
  out.head_terms = smooth.size();

  Rational head = 0;
  constexpr std::size_t kChunk = 256;
  for (std::size_t s = 0; s < smooth.size(); s += kChunk) {
    std::size_t e = std::min(smooth.size(), s + kChunk);
    BigInt L = 1;
    for (std::size_t i = s; i < e; ++i) {
      BigInt v = to_big(smooth[i]);
      mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), v.get_mpz_t());
    }
    BigInt acc = 0;
    for (std::size_t i = s; i < e; ++i) acc += L / to_big(smooth[i]);
    head += make_rational(acc, L);
  }
  out.head = head;
  out.tail = out.euler_product - head;

  double logN = std::log(static_cast<double>(N));
  double logQ = std::log(Q);
  out.u = logN / logQ;
  out.approx_bound_shape = out.u > 0 ? logQ * std::exp(-out.u * std::log(out.u)) : logQ;
  return out;
}

double L_threshold(double N, double s) {
  double inner = s * std::log(N);
  if (!(inner > std::exp(1.0)))
    throw std::domain_error("L_threshold requires s log N > e");
  double l = std::log(inner);
  return std::exp(std::log(N) * std::log(l) / l);
}

}  // namespace covsys
