#pragma once

// Brute-force oracles and random instance generators shared by the unit
// tests and the acceptance runner. Nothing here calls the engines it is
// used to check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "covsys/arith.hpp"
#include "covsys/core.hpp"

namespace covsys::testing {

inline std::uint64_t plain_lcm(const ResidueSystem& c) {
  std::uint64_t L = 1;
  for (const auto& cls : c) L = std::lcm(L, cls.modulus());
  return L;
}

/// Uncovered count over [0, lcm) by testing every integer against every class.
inline std::uint64_t brute_uncovered(const ResidueSystem& c, std::uint64_t L) {
  std::uint64_t u = 0;
  for (std::uint64_t x = 0; x < L; ++x) {
    bool hit = false;
    for (const auto& cls : c)
      if (x % cls.modulus() == cls.residue()) {
        hit = true;
        break;
      }
    u += !hit;
  }
  return u;
}

inline Rational brute_density(const ResidueSystem& c) {
  std::uint64_t L = plain_lcm(c);
  return make_rational(static_cast<std::int64_t>(brute_uncovered(c, L)), L);
}

/// Every integer in one period covered exactly once.
inline bool brute_exact_cover(const ResidueSystem& c) {
  std::uint64_t L = plain_lcm(c);
  for (std::uint64_t x = 0; x < L; ++x) {
    int hits = 0;
    for (const auto& cls : c) hits += x % cls.modulus() == cls.residue();
    if (hits != 1) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> divisors_of(std::uint64_t n) {
  std::vector<std::uint64_t> d;
  for (std::uint64_t k = 1; k <= n; ++k)
    if (n % k == 0) d.push_back(k);
  return d;
}

/// Periods <= 10^4 with plenty of divisors.
inline const std::vector<std::uint64_t>& random_periods() {
  static const std::vector<std::uint64_t> periods{12, 24, 30, 36, 48, 60, 72, 84, 90, 120, 144, 180, 210, 240,
                                                  252, 360, 420, 480, 504, 630, 720, 840, 1008, 1260, 1680,
                                                  2520, 5040, 7560, 9240, 10000};
  return periods;
}

/// Random system whose moduli all divide a random period from the list,
/// so lcm <= 10^4. Moduli > 1 unless allow_one.
inline ResidueSystem random_system(std::mt19937_64& rng, std::size_t max_classes = 12, bool allow_one = false) {
  const auto& periods = random_periods();
  std::uint64_t L = periods[rng() % periods.size()];
  auto divs = divisors_of(L);
  if (!allow_one) divs.erase(divs.begin());
  std::size_t l = 1 + rng() % max_classes;
  ResidueSystem c;
  for (std::size_t i = 0; i < l; ++i) {
    std::uint64_t n = divs[rng() % divs.size()];
    c.add(n, static_cast<std::int64_t>(rng() % n));
  }
  return c;
}

/// Independent exact alpha - beta straight from the definitions.
inline Rational plain_alpha(const ResidueSystem& c) {
  Rational a = 1;
  for (const auto& cls : c) a *= make_rational(static_cast<std::int64_t>(cls.modulus() - 1), cls.modulus());
  return a;
}

inline Rational plain_beta(const ResidueSystem& c) {
  Rational b = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (std::gcd(c[i].modulus(), c[j].modulus()) > 1)
        b += make_rational(1, c[i].modulus() * c[j].modulus());
  return b;
}

inline Rational plain_refined_beta(const ResidueSystem& c) {
  Rational b = 0;
  for (std::size_t j = 0; j < c.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) {
      if (std::gcd(c[i].modulus(), c[j].modulus()) == 1) continue;
      Rational term = make_rational(1, c[i].modulus() * c[j].modulus());
      for (std::size_t u = j + 1; u < c.size(); ++u)
        term *= make_rational(static_cast<std::int64_t>(c[u].modulus() - 1), c[u].modulus());
      b += term;
    }
  return b;
}

/// Moments of delta over all residue choices by literal enumeration.
struct PlainMoments {
  Rational mean, second;
};

inline PlainMoments plain_moments(const std::vector<std::uint64_t>& T) {
  std::uint64_t L = 1, W = 1;
  for (auto n : T) {
    L = std::lcm(L, n);
    W *= n;
  }
  Rational s1 = 0, s2 = 0;
  for (std::uint64_t idx = 0; idx < W; ++idx) {
    std::uint64_t k = idx;
    ResidueSystem c;
    for (std::size_t i = 0; i < T.size(); ++i) {
      c.add(T[i], static_cast<std::int64_t>(k % T[i]));
      k /= T[i];
    }
    Rational d = make_rational(static_cast<std::int64_t>(brute_uncovered(c, L)), L);
    s1 += d;
    s2 += d * d;
  }
  return {s1 / to_big(W), s2 / to_big(W)};
}

/// Searches for an exact cover with distinct moduli > 1 drawn from the
/// divisors of L (<= lcm_limit) with sum 1/n = 1. Returns the number of
/// candidate moduli sets tried and whether any cover was found.
struct NewmanSearchResult {
  std::uint64_t candidate_sets = 0;
  std::uint64_t placements = 0;
  bool found = false;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cover;
};

/// Exact-cover placement. Every cell in [0, L) needs exactly one class and
/// every modulus exactly one residue; branch on whichever constraint has the
/// fewest free options.
inline bool place_disjoint(std::vector<std::uint64_t>& moduli, std::uint64_t L, std::vector<char>& used,
                           std::vector<std::pair<std::uint64_t, std::uint64_t>>& chosen,
                           std::uint64_t& placements) {
  if (moduli.empty()) return true;
  const std::size_t k = moduli.size();
  std::vector<std::vector<char>> ok(k);
  std::size_t best_mod = k, best_mod_count = SIZE_MAX;
  for (std::size_t i = 0; i < k; ++i) {
    if (i > 0 && moduli[i - 1] == moduli[i]) {
      ok[i] = ok[i - 1];
      continue;
    }
    std::uint64_t n = moduli[i];
    ok[i].assign(n, 1);
    for (std::uint64_t x = 0; x < L; ++x)
      if (used[x]) ok[i][x % n] = 0;
    std::size_t c = 0;
    for (char f : ok[i]) c += f;
    if (c == 0) return false;
    if (c < best_mod_count) {
      best_mod_count = c;
      best_mod = i;
    }
  }
  std::uint64_t best_cell = L;
  std::size_t best_cell_count = SIZE_MAX;
  for (std::uint64_t x = 0; x < L; ++x) {
    if (used[x]) continue;
    std::size_t c = 0;
    for (std::size_t i = 0; i < k; ++i)
      if ((i == 0 || moduli[i - 1] != moduli[i]) && ok[i][x % moduli[i]]) ++c;
    if (c == 0) return false;
    if (c < best_cell_count) {
      best_cell_count = c;
      best_cell = x;
    }
  }
  // (modulus index, residue) options for the chosen constraint
  std::vector<std::pair<std::size_t, std::uint64_t>> options;
  if (best_cell < L && best_cell_count < best_mod_count) {
    for (std::size_t i = 0; i < k; ++i)
      if ((i == 0 || moduli[i - 1] != moduli[i]) && ok[i][best_cell % moduli[i]])
        options.emplace_back(i, best_cell % moduli[i]);
  } else {
    for (std::uint64_t r = 0; r < moduli[best_mod]; ++r)
      if (ok[best_mod][r]) options.emplace_back(best_mod, r);
  }
  for (auto [i, r] : options) {
    std::uint64_t n = moduli[i];
    ++placements;
    for (std::uint64_t x = r; x < L; x += n) used[x] = 1;
    chosen.emplace_back(n, r);
    moduli.erase(moduli.begin() + static_cast<std::ptrdiff_t>(i));
    bool done = place_disjoint(moduli, L, used, chosen, placements);
    moduli.insert(moduli.begin() + static_cast<std::ptrdiff_t>(i), n);
    if (done) return true;
    chosen.pop_back();
    for (std::uint64_t x = r; x < L; x += n) used[x] = 0;
  }
  return false;
}

/// Candidate sets: multisets of divisors > 1 of some L <= lcm_limit whose
/// reciprocals sum to exactly 1 and whose lcm is L; every candidate with
/// lcm <= lcm_limit is met exactly once this way. Moduli are distinct
/// unless `allow_repeat`, which permits each up to twice (positive control).
inline NewmanSearchResult newman_search(std::uint64_t lcm_limit, bool allow_repeat = false) {
  NewmanSearchResult out;
  const std::uint64_t max_mult = allow_repeat ? 2 : 1;
  for (std::uint64_t L = 2; L <= lcm_limit && !out.found; ++L) {
    auto divs = divisors_of(L);
    divs.erase(divs.begin());
    // Sums in units of 1/L.
    std::vector<std::uint64_t> suffix(divs.size() + 1, 0);
    for (std::size_t k = divs.size(); k-- > 0;) suffix[k] = suffix[k + 1] + max_mult * (L / divs[k]);
    std::vector<std::uint64_t> pick;
    std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t i, std::uint64_t sum) {
      if (out.found) return;
      if (sum == L) {
        std::uint64_t l = 1;
        for (auto n : pick) l = std::lcm(l, n);
        if (l != L) return;
        ++out.candidate_sets;
        std::vector<std::uint64_t> moduli(pick.rbegin(), pick.rend());  // largest first
        std::vector<char> used(L, 0);
        std::vector<std::pair<std::uint64_t, std::uint64_t>> chosen;
        if (place_disjoint(moduli, L, used, chosen, out.placements)) {
          out.found = true;
          out.cover = chosen;
        }
        return;
      }
      if (i == divs.size() || sum + suffix[i] < L) return;
      std::uint64_t unit = L / divs[i];
      for (std::uint64_t m = max_mult + 1; m-- > 0;) {
        if (sum + m * unit > L) continue;
        for (std::uint64_t k = 0; k < m; ++k) pick.push_back(divs[i]);
        rec(i + 1, sum + m * unit);
        for (std::uint64_t k = 0; k < m; ++k) pick.pop_back();
      }
    };
    rec(0, 0);
  }
  return out;
}

}  // namespace covsys::testing
