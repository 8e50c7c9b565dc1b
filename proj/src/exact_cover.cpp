#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "covsys/construct.hpp"

namespace covsys {

std::string_view to_string(XSchedule s) noexcept {
  return s == XSchedule::standard ? "standard" : "minimal";
}

namespace {

std::uint64_t xineq_lhs(std::uint64_t lo, std::uint64_t X) {
  std::uint64_t sum = 0;
  for_each_prime(static_cast<double>(lo), static_cast<double>(X), [&](std::uint64_t p) { sum += X / p; });
  return sum;
}

std::uint64_t standard_x(unsigned j) {
  std::uint64_t x = 1;
  for (unsigned i = 0; i <= j; ++i) {
    auto next = mul_bounded(x, j + 1, std::numeric_limits<std::uint64_t>::max());
    if (!next) throw GuardExceeded("X_j", "(j+1)^(j+1) with j = " + std::to_string(j), "2^64");
    x = *next;
  }
  return x;
}

}  // namespace

std::vector<std::uint64_t> x_schedule(unsigned J, XSchedule schedule) {
  std::vector<std::uint64_t> X{1};
  for (unsigned j = 1; j <= J; ++j) {
    if (schedule == XSchedule::standard) {
      X.push_back(standard_x(j));
      continue;
    }
    std::uint64_t prev = X.back();
    std::uint64_t x = prev + 1;
    while (xineq_lhs(prev, x) < prev) {
      if (++x > kXineqSieveLimit) throw GuardExceeded("minimal X_j", "> " + std::to_string(x), "10^9");
    }
    X.push_back(x);
  }
  return X;
}

XineqResult xineq_check(unsigned j) {
  if (j < 1) throw InputError("xineq_check requires j >= 1");
  std::uint64_t X = standard_x(j), prev = standard_x(j - 1);
  if (X > kXineqSieveLimit)
    throw GuardExceeded("xineq sieve range", std::to_string(X), std::to_string(kXineqSieveLimit));
  XineqResult out;
  out.lhs = xineq_lhs(prev, X);
  out.rhs = prev;
  out.holds = out.lhs >= out.rhs;
  return out;
}

ExactCoverPlan exact_cover_construct(unsigned J, XSchedule schedule, std::uint64_t guard) {
  if (J < 1) throw InputError("exact_cover_construct requires J >= 1");
  ExactCoverPlan plan;
  plan.J = J;
  plan.schedule = schedule;
  plan.X = x_schedule(J, schedule);
  for (unsigned j = 1; j <= J; ++j)
    plan.prime_blocks.push_back(primes_in(static_cast<double>(plan.X[j - 1]), static_cast<double>(plan.X[j])));
  plan.N_J = 1;
  for (unsigned j = 0; j < J; ++j) plan.N_J *= to_big(plan.X[j]);

  std::vector<ResidueClass> current{ResidueClass(2, 0), ResidueClass(2, 1)};
  for (unsigned level = 1; level < J; ++level) {
    const std::uint64_t Xn = plan.X[level + 1];
    const auto& q = plan.prime_blocks[level];  // P_{level+1}
    std::map<std::uint64_t, std::vector<std::uint64_t>> by_modulus;
    for (const auto& c : current) by_modulus[c.modulus()].push_back(c.residue());

    std::uint64_t total = 0;
    std::vector<ResidueClass> next;
    for (auto& [n, residues] : by_modulus) {
      std::sort(residues.begin(), residues.end());
      std::size_t block = 0, used = 0;
      for (auto r : residues) {
        while (block < q.size() && used == Xn / q[block]) {
          ++block;
          used = 0;
        }
        if (block == q.size())
          throw InternalError("ran out of primes in P_" + std::to_string(level + 1) + " for modulus " +
                              std::to_string(n));
        const std::uint64_t p = q[block];
        ++used;
        total += p;
        if (total > guard) throw GuardExceeded("exact cover classes", "> " + std::to_string(guard),
                                               std::to_string(guard));
        for (std::uint64_t mu = 0; mu < p; ++mu)
          next.emplace_back(n * p, static_cast<std::int64_t>(r + n * mu));
      }
    }
    current = std::move(next);
  }
  plan.system = ResidueSystem(std::move(current));
  return plan;
}

}  // namespace covsys
