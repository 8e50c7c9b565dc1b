#pragma once

// Flat bitset over a residue range, used by the sieve, the exhaustive
// searches and the greedy window. Bit set = residue still uncovered.

#include <bit>
#include <cstdint>
#include <vector>

namespace covsys::detail {

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::uint64_t size, bool value = true)
      : size_(size), words_((size + 63) / 64, value ? ~0ULL : 0ULL) {
    trim();
  }

  std::uint64_t size() const noexcept { return size_; }

  bool test(std::uint64_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1; }
  void reset(std::uint64_t i) noexcept { words_[i >> 6] &= ~(1ULL << (i & 63)); }

  /// Clears start, start+step, ... below size().
  void clear_stride(std::uint64_t start, std::uint64_t step) noexcept {
    if (step == 1) {
      for (std::uint64_t i = start; i < size_ && (i & 63); ++i) reset(i);
      std::uint64_t w = (start + 63) / 64;
      for (; w < words_.size(); ++w) words_[w] = 0;
      return;
    }
    for (std::uint64_t i = start; i < size_; i += step) reset(i);
  }

  /// Number of set bits in positions start, start+step, ...
  std::uint64_t count_stride(std::uint64_t start, std::uint64_t step) const noexcept {
    std::uint64_t c = 0;
    for (std::uint64_t i = start; i < size_; i += step) c += test(i);
    return c;
  }

  std::uint64_t count() const noexcept {
    std::uint64_t c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  /// Index of the first set bit, or size() if none.
  std::uint64_t first() const noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w]) return w * 64 + std::countr_zero(words_[w]);
    return size_;
  }

  template <class F>
  void for_each_set(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(w * 64 + std::countr_zero(bits));
        bits &= bits - 1;
      }
    }
  }

 private:
  void trim() noexcept {
    if (size_ % 64 && !words_.empty()) words_.back() &= (1ULL << (size_ % 64)) - 1;
  }

  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace covsys::detail
