#include <algorithm>
#include <limits>

#include "bitset.hpp"
#include "covsys/construct.hpp"

namespace covsys {

std::string_view to_string(GreedyPhase p) noexcept {
  return p == GreedyPhase::random ? "random" : "greedy";
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// std::uniform_int_distribution is implementation defined, which would
// make seeded output differ across standard libraries.
std::uint64_t uniform_below(std::uint64_t n, std::uint64_t& state) {
  if (n == 0) throw InputError("uniform_below requires n >= 1");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    std::uint64_t x = splitmix64(state);
    if (x < limit) return x % n;
  }
}

std::optional<std::uint64_t> greedy_exact_window(std::uint64_t N, std::uint64_t K,
                                                 std::uint64_t ceiling) {
  std::vector<std::uint64_t> moduli;
  for (std::uint64_t n = N + 1; n <= K * N; ++n) moduli.push_back(n);
  return lcm_within(moduli, ceiling);
}

GreedyTrace greedy_cover(std::uint64_t N, std::uint64_t K, GreedyOptions options) {
  if (N < 1) throw InputError("greedy_cover requires N >= 1");
  if (K < 2) throw InputError("greedy_cover requires K >= 2");
  GreedyTrace trace;
  trace.N = N;
  trace.K = K;
  trace.seed = options.seed;
  trace.window = options.window ? options.window : 10 * K * N;
  const std::uint64_t W = trace.window;
  if (W < K * N) throw InputError("window must be at least K*N");
  if (W > std::numeric_limits<std::uint32_t>::max()) throw InputError("window must fit in 32 bits");

  // r(d) for d in (N, 2N], indexed by d - N - 1.
  std::vector<std::uint64_t> random_r;
  detail::Bitset window(W);
  std::uint64_t uncovered = W;
  const std::uint64_t top_random = std::min(2 * N, K * N);
  for (std::uint64_t n = N + 1; n <= top_random; ++n) {
    std::uint64_t state = options.seed ^ (n * 0xd1b54a32d192ed03ULL);
    splitmix64(state);
    std::uint64_t r = uniform_below(n, state);
    random_r.push_back(r);
    window.clear_stride(r, n);
    GreedyStep step;
    step.j = n;
    step.phase = GreedyPhase::random;
    step.r = r;
    step.uncovered_before = uncovered;
    uncovered = window.count();
    step.uncovered_after = uncovered;
    trace.steps.push_back(std::move(step));
    trace.final_system.add(n, static_cast<std::int64_t>(r));
  }

  std::vector<std::uint32_t> live;
  live.reserve(uncovered);
  window.for_each_set([&](std::uint64_t i) { live.push_back(static_cast<std::uint32_t>(i)); });
  window = detail::Bitset();

  std::vector<std::uint64_t> counts;
  std::vector<char> admissible;
  for (std::uint64_t j = 2 * N + 1; j <= K * N; ++j) {
    GreedyStep step;
    step.j = j;
    step.phase = GreedyPhase::greedy;
    for (std::uint64_t d = N + 1; d <= 2 * N; ++d)
      if (j % d == 0) step.D.push_back(d);

    admissible.assign(j, 1);
    for (auto d : step.D) {
      std::uint64_t rd = random_r[d - N - 1];
      for (std::uint64_t r = rd; r < j; r += d) admissible[r] = 0;
    }
    step.f = static_cast<std::uint64_t>(std::count(admissible.begin(), admissible.end(), 1));

    counts.assign(j, 0);
    for (auto x : live) ++counts[x % j];
    std::uint64_t best_r = 0, best = 0;
    bool found = false;
    for (std::uint64_t r = 0; r < j; ++r) {
      if (step.f > 0 && !admissible[r]) continue;
      if (!found || counts[r] > best) {
        best = counts[r];
        best_r = r;
        found = true;
      }
    }
    step.r = best_r;
    step.uncovered_before = live.size();
    std::erase_if(live, [&](std::uint32_t x) { return x % j == best_r; });
    step.uncovered_after = live.size();
    trace.steps.push_back(std::move(step));
    trace.final_system.add(j, static_cast<std::int64_t>(best_r));
  }

  trace.exact_period = true;
  for (std::uint64_t n = N + 1; n <= K * N; ++n)
    if (W % n) trace.exact_period = false;
  trace.final_uncovered_fraction = make_rational(static_cast<std::int64_t>(live.size()), W);
  return trace;
}

bool greedy_step_invariant(const GreedyTrace& trace) {
  std::uint64_t previous = trace.window;
  for (const auto& step : trace.steps) {
    if (step.uncovered_before != previous || step.uncovered_after > step.uncovered_before) return false;
    previous = step.uncovered_after;
    if (step.phase != GreedyPhase::greedy) continue;

    using u128 = unsigned __int128;
    const u128 before = step.uncovered_before, after = step.uncovered_after;
    const u128 slack = trace.window % step.j == 0 ? 0 : 1;
    // after <= (1 - 1/j) before + slack
    if (after * step.j > (step.j - 1) * before + slack * step.j) return false;
    if (step.D.empty()) continue;
    if (step.f == 0) {
      if (before != 0) return false;
      continue;
    }
    // after <= (1 - 1/f) before + slack
    if (after * step.f > (step.f - 1) * before + slack * step.f) return false;
  }
  return true;
}

}  // namespace covsys
