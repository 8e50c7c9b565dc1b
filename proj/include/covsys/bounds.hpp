#pragma once

// Lower bounds on the uncovered density: the independence product alpha,
// the dependent-pair correction beta, and certificates built from them.
// Also the exact smooth reciprocal tail and the L(N, s) threshold.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "covsys/arith.hpp"
#include "covsys/core.hpp"

namespace covsys {

/// prod (1 - 1/n) over the moduli multiset.
Rational alpha(const ResidueSystem& system);
Rational alpha(const ModuliSet& moduli);

/// sum of 1/(n_i n_j) over index pairs i < j with gcd(n_i, n_j) > 1.
Rational beta(const ResidueSystem& system);

enum class BoundKind { lemma1, lemma1_refined, decomposed };
enum class Conclusion { positive, inconclusive };

std::string_view to_string(BoundKind k) noexcept;
std::string_view to_string(Conclusion c) noexcept;

/// One residue class h mod M (or a group of them sharing a subsystem)
/// in a decomposed certificate.
struct SubsystemContribution {
  std::uint64_t representative_h = 0;
  std::uint64_t count = 1;  // how many h share this subsystem
  Rational alpha;
  Rational beta;
  Rational bound;  // max(0, alpha - beta) or refined analogue
};

struct BoundCertificate {
  BoundKind kind = BoundKind::lemma1;
  Rational lower_bound;
  std::map<std::string, Rational> components;  // alpha, beta, ...
  std::vector<SubsystemContribution> terms;    // decomposed kind only

  Conclusion conclusion() const noexcept {
    return lower_bound > 0 ? Conclusion::positive : Conclusion::inconclusive;
  }
};

struct Lemma1Options {
  bool refined = false;
  /// Sort classes by decreasing modulus before the refined sum.
  bool sort_descending = false;
};

/// delta >= alpha - beta; the refined form damps each dependent pair
/// (i, j) by prod_{u > j} (1 - 1/n_u) in the stored class order.
BoundCertificate lemma1_bound(const ResidueSystem& system, Lemma1Options options = {});

/// The subtracted term of the refined bound, in stored order.
Rational refined_beta(const ResidueSystem& system);

struct SmoothTail {
  Rational tail;           // sum over n > N with P(n) <= Q of 1/n
  Rational euler_product;  // prod over p <= Q of 1/(1 - 1/p)
  Rational head;           // sum over n <= N with P(n) <= Q of 1/n
  std::uint64_t head_terms = 0;
  double u = 0;                  // log N / log Q
  double approx_bound_shape = 0; // (log Q) exp(-u log u)
};

/// Exact smooth reciprocal tail via the Euler product identity.
SmoothTail smooth_tail_sum(std::uint64_t N, double Q);

/// exp(log N * loglog(s log N) / log(s log N)). Floating point only.
double L_threshold(double N, double s);

}  // namespace covsys
