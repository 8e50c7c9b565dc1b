#include <cmath>
#include <set>

#include "covsys/construct.hpp"
#include "covsys/decompose.hpp"
#include "covsys/density.hpp"

namespace covsys {

WitnessExtension extend_witness(const ResidueSystem& system, std::uint64_t B, std::uint64_t s) {
  if (B < 2) throw InputError("extend_witness requires B >= 2");
  if (s < 1) throw InputError("extend_witness requires s >= 1");
  for (const auto& c : system)
    if (c.modulus() < 2 || c.modulus() > B)
      throw InputError("modulus " + std::to_string(c.modulus()) + " outside (1, B]");
  if (system.max_multiplicity() > s) throw InputError("multiplicity exceeds s");

  WitnessExtension out;
  out.cutoff = std::sqrt(static_cast<double>(s) * static_cast<double>(B));

  ResidueSystem smooth;
  // large prime p -> residues r mod p of the classes whose modulus it divides
  std::map<std::uint64_t, std::set<std::uint64_t>> blocked;
  std::map<std::uint64_t, std::uint64_t> multiples;
  for (const auto& c : system) {
    std::uint64_t P = factorize(c.modulus()).largest_prime();
    if (static_cast<double>(P) <= out.cutoff) {
      smooth.add(c);
      continue;
    }
    blocked[P].insert(c.residue() % P);
    ++multiples[P];
  }
  out.smooth_classes = smooth.size();

  auto L = lcm_within(smooth, kDefaultScanGuard);
  if (!L) throw GuardExceeded("lcm of the smooth moduli", "> 10^9", "10^9");
  out.L = to_big(*L);
  auto a = uncovered_witness(smooth);
  if (!a) throw SmoothCoverError("the classes with P(n) <= sqrt(sB) cover every integer");
  out.a = *a;

  BigInt A = out.a, modulus = out.L;
  for (const auto& [p, residues] : blocked) {
    if (multiples[p] > p - 1)
      throw InternalError("more than p - 1 multiples of " + std::to_string(p) + " among the moduli");
    std::uint64_t b = 0;
    while (residues.count(b)) ++b;
    out.b[p] = b;
    A = crt_pair(A, modulus, b, p);
    modulus *= to_big(p);
  }
  if (!system.uncovered(A)) throw InternalError("extended witness " + A.get_str() + " is covered");
  out.A = A;
  return out;
}

}  // namespace covsys
