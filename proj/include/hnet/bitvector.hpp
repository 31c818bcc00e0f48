#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace hnet {

// Fixed-length packed boolean vector. Bits beyond size() are always zero, so
// word-wise AND / popcount never see garbage in the tail.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size, bool value = false)
      : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
    trim();
  }

  std::size_t size() const noexcept { return size_; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }

  void set(std::size_t i, bool value = true) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  std::size_t count() const noexcept {
    std::size_t total = 0;
    for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
  }

  bool none() const noexcept {
    for (auto w : words_) {
      if (w != 0) return false;
    }
    return true;
  }

  BitVector& operator&=(const BitVector& other) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }

  friend BitVector operator&(BitVector a, const BitVector& b) noexcept { return a &= b; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

  // popcount(a & b) without materialising the intersection.
  static std::size_t count_and(const BitVector& a, const BitVector& b) noexcept {
    std::size_t total = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
      total += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i]));
    }
    return total;
  }

  static std::size_t count_and(const BitVector& a, const BitVector& b, const BitVector& c) noexcept {
    std::size_t total = 0;
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
      total += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i] & c.words_[i]));
    }
    return total;
  }

 private:
  void trim() noexcept {
    if (size_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace hnet
