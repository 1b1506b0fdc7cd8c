#pragma once

#include <cstdint>
#include <vector>

namespace autocsf {

// Fixed-size bit vector backed by 64-bit words. Bit i lives in word i/64
// at position i%64 (LSB-first within each word).
class BitArray {
 public:
  BitArray() = default;
  explicit BitArray(uint64_t num_bits)
      : num_bits_(num_bits), words_((num_bits + 63) / 64, 0) {}

  uint64_t numBits() const { return num_bits_; }
  uint64_t numWords() const { return words_.size(); }

  bool get(uint64_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
  }

  void set(uint64_t i, bool value) {
    uint64_t mask = 1ULL << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  void flip(uint64_t i) { words_[i >> 6] ^= 1ULL << (i & 63); }

  // Reads `count` (<= 64) consecutive bits starting at `start`, returned
  // LSB-first: result bit j equals stored bit start + j.
  uint64_t getWord(uint64_t start, int count) const {
    uint64_t word_index = start >> 6;
    int offset = static_cast<int>(start & 63);
    uint64_t value = words_[word_index] >> offset;
    if (offset + count > 64 && word_index + 1 < words_.size()) {
      value |= words_[word_index + 1] << (64 - offset);
    }
    if (count < 64) {
      value &= (1ULL << count) - 1;
    }
    return value;
  }

  // Writes `count` (<= 64) consecutive bits starting at `start` from
  // `value` (LSB-first). Bits beyond `count` in `value` must be zero.
  void setWord(uint64_t start, int count, uint64_t value) {
    uint64_t word_index = start >> 6;
    int offset = static_cast<int>(start & 63);
    uint64_t mask = (count < 64) ? ((1ULL << count) - 1) : ~0ULL;
    words_[word_index] &= ~(mask << offset);
    words_[word_index] |= value << offset;
    if (offset + count > 64) {
      int spill = offset + count - 64;
      uint64_t spill_mask = (1ULL << spill) - 1;
      words_[word_index + 1] &= ~spill_mask;
      words_[word_index + 1] |= value >> (64 - offset);
    }
  }

  const uint64_t* words() const { return words_.data(); }
  uint64_t* words() { return words_.data(); }

 private:
  uint64_t num_bits_ = 0;
  std::vector<uint64_t> words_;
};

}  // namespace autocsf
