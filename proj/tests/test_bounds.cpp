#include <algorithm>
#include <cmath>
#include <random>

#include "covsys/bounds.hpp"
#include "covsys/density.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace covsys;
using namespace covsys::testing;

namespace {

// 3-smooth tail in closed form: for each power 3^b the powers of 2 with
// 2^a 3^b > N form a geometric series, and once 3^b > N every a counts.
Rational three_smooth_tail(std::uint64_t N) {
  Rational total = 0;
  BigInt three = 1;
  while (three <= to_big(N)) {
    BigInt two = 1;
    while (two * three <= to_big(N)) two *= 2;
    total += Rational(2) / Rational(two * three);  // sum_{a >= a0} 1/(2^a 3^b)
    three *= 3;
  }
  // sum_{b >= b0} 2 / 3^b = 3 / 3^b0
  total += Rational(3) / Rational(three);
  return total;
}

std::uint64_t largest_prime_factor(std::uint64_t n) {
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    while (n % d == 0) {
      p = d;
      n /= d;
    }
  return n > 1 ? n : p;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("alpha examples") {
  CHECK(alpha(ResidueSystem{{2, 0}, {4, 1}, {3, 0}}) == make_rational(1, 4));
  ModuliSet interval;
  for (std::uint64_t n = 11; n <= 30; ++n) interval.add(n);
  CHECK(alpha(interval) == make_rational(1, 3));
  CHECK(alpha(ResidueSystem{{1, 0}}) == 0);
  CHECK(alpha(ResidueSystem{}) == 1);
  CHECK(alpha(ModuliSet{3, 3}) == make_rational(4, 9));
}

TEST_CASE("beta examples") {
  CHECK(beta(ResidueSystem{{2, 0}, {4, 1}, {3, 0}}) == make_rational(1, 8));
  CHECK(beta(ResidueSystem{{2, 0}, {3, 1}}) == 0);
  CHECK(beta(ResidueSystem{{2, 0}, {2, 1}, {4, 3}}) == make_rational(1, 2));
  CHECK(beta(ResidueSystem{{1, 0}, {1, 0}, {5, 0}}) == 0);
}

TEST_CASE("lemma1_bound examples") {
  ResidueSystem c{{2, 0}, {4, 1}, {3, 0}};
  auto plain = lemma1_bound(c);
  CHECK(plain.kind == BoundKind::lemma1);
  CHECK(plain.lower_bound == make_rational(1, 8));
  CHECK(plain.components.at("alpha") == make_rational(1, 4));
  CHECK(plain.components.at("beta") == make_rational(1, 8));
  CHECK(plain.conclusion() == Conclusion::positive);
  auto refined = lemma1_bound(c, {.refined = true});
  CHECK(refined.kind == BoundKind::lemma1_refined);
  CHECK(refined.lower_bound == make_rational(1, 6));
  CHECK(refined.lower_bound == exact_density(c).value);

  ResidueSystem coprime{{3, 0}, {4, 1}, {5, 2}, {7, 3}};
  CHECK(lemma1_bound(coprime).lower_bound == alpha(coprime));
  CHECK(lemma1_bound(coprime).components.at("beta") == 0);

  auto opening = lemma1_bound(ResidueSystem{{2, 0}, {3, 0}, {4, 1}, {6, 1}, {12, 11}});
  CHECK(opening.conclusion() == Conclusion::inconclusive);
}

TEST_CASE("beta and refined beta agree with pairwise oracles") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 2000; ++i) {
    auto c = random_system(rng, 12, i % 5 == 0);
    REQUIRE(alpha(c) == plain_alpha(c));
    REQUIRE(beta(c) == plain_beta(c));
    REQUIRE(refined_beta(c) == plain_refined_beta(c));
    REQUIRE(lemma1_bound(c).lower_bound == plain_alpha(c) - plain_beta(c));
  }
}

TEST_CASE("bounds never exceed the exact density; refined dominates plain") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 1500; ++i) {
    auto c = random_system(rng, 12);
    Rational d = brute_density(c);
    auto plain = lemma1_bound(c).lower_bound;
    auto refined = lemma1_bound(c, {.refined = true}).lower_bound;
    auto desc = lemma1_bound(c, {.refined = true, .sort_descending = true}).lower_bound;
    REQUIRE(plain <= refined);
    REQUIRE(plain <= desc);
    REQUIRE(refined <= d);
    REQUIRE(desc <= d);
  }
}

TEST_CASE("every ordering's refined bound lower-bounds delta") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 60; ++i) {
    auto c = random_system(rng, 5);
    std::vector<ResidueClass> v(c.begin(), c.end());
    std::sort(v.begin(), v.end());
    Rational d = brute_density(c);
    Rational a = alpha(c);
    do {
      ResidueSystem p(v);
      REQUIRE(alpha(p) == a);
      REQUIRE(lemma1_bound(p, {.refined = true}).lower_bound <= d);
    } while (std::next_permutation(v.begin(), v.end()));
  }
}

TEST_CASE("beta is zero exactly for pairwise coprime moduli") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 1000; ++i) {
    auto c = random_system(rng, 6);
    bool coprime = true;
    for (std::size_t a = 0; a < c.size(); ++a)
      for (std::size_t b = a + 1; b < c.size(); ++b)
        if (std::gcd(c[a].modulus(), c[b].modulus()) > 1) coprime = false;
    REQUIRE((beta(c) == 0) == coprime);
    REQUIRE(beta(c) >= 0);
  }
}

TEST_CASE("smooth_tail_sum examples") {
  auto t = smooth_tail_sum(10, 3);
  CHECK(t.euler_product == 3);
  CHECK(t.head == make_rational(179, 72));
  CHECK(t.tail == make_rational(37, 72));
  CHECK(t.head_terms == 7);
  CHECK(smooth_tail_sum(1, 2).tail == 1);
  auto f = smooth_tail_sum(100, 5);
  CHECK(f.euler_product == make_rational(15, 4));
  CHECK(f.tail > 0);
  CHECK(f.tail < make_rational(15, 4));
  CHECK_THROWS_AS(smooth_tail_sum(10, 1.5), InputError);
}

TEST_CASE("smooth_tail_sum matches closed forms and direct enumeration") {
  for (std::uint64_t N : {1, 2, 3, 7, 10, 100, 1000, 12345, 1'000'000}) {
    // powers of 2 above N: 2 / 2^k0
    std::uint64_t two = 1;
    while (two <= N) two *= 2;
    CHECK(smooth_tail_sum(N, 2).tail == make_rational(2, two));
    CHECK(smooth_tail_sum(N, 3).tail == three_smooth_tail(N));
  }
  for (std::uint64_t N : {50, 300, 2000})
    for (double Q : {5.0, 7.0, 11.5}) {
      auto t = smooth_tail_sum(N, Q);
      Rational head = 0;
      for (std::uint64_t n = 1; n <= N; ++n)
        if (static_cast<double>(largest_prime_factor(n)) <= Q) head += make_rational(1, n);
      CHECK(t.head == head);
      CHECK(t.tail == t.euler_product - head);
    }
}

TEST_CASE("smooth_tail_sum monotonicity") {
  Rational prev = smooth_tail_sum(1, 7).tail;
  for (std::uint64_t N = 2; N < 400; ++N) {
    Rational cur = smooth_tail_sum(N, 7).tail;
    REQUIRE(cur <= prev);
    prev = cur;
  }
  for (std::uint64_t N : {10, 100, 1000}) {
    Rational last = smooth_tail_sum(N, 2).tail;
    for (double Q : {3.0, 5.0, 7.0, 11.0, 13.0, 29.0}) {
      Rational cur = smooth_tail_sum(N, Q).tail;
      REQUIRE(cur >= last);
      last = cur;
    }
  }
}

TEST_CASE("L_threshold") {
  CHECK(L_threshold(1e6, 1) == doctest::Approx(160.6).epsilon(1e-3));
  double l20 = std::log(std::log(20.0));
  CHECK(L_threshold(20, 1) == doctest::Approx(std::exp(std::log(20.0) * std::log(l20) / l20)));
  CHECK(L_threshold(1e6, 10) < L_threshold(1e6, 1));
  CHECK(L_threshold(1e6, 100) < L_threshold(1e6, 10));
  CHECK_THROWS_AS(L_threshold(2, 1), std::domain_error);
}

}  // TEST_SUITE
