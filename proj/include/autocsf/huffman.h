#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include <autocsf/byte_io.h>
#include <autocsf/dataset.h>
#include <autocsf/errors.h>

namespace autocsf {

// Longest admissible codeword. Keeps codewords in a uint64_t with room to
// spare; histograms that would exceed it are flattened before coding.
constexpr int kMaxCodeLength = 58;

// Length-limited canonical Huffman code over the distinct values of a
// histogram. Codewords are assigned in canonical order: sorted by (length
// ascending, histogram rank ascending), each codeword is the previous one
// incremented and left-shifted to its length. Only the (value, length)
// pairs in canonical order need to be stored to reconstruct the decoder.
class CanonicalCode {
 public:
  struct Codeword {
    uint8_t length;
    uint64_t bits;  // MSB-first: bit j transmitted is (bits >> (length-1-j)) & 1

    bool bit(int j) const { return (bits >> (length - 1 - j)) & 1ULL; }
  };

  // Builds the code for a histogram (entries sorted by descending
  // frequency). Ties during tree construction are broken toward lower
  // histogram ranks, so construction is fully deterministic. A histogram
  // with one distinct value gets the single codeword "0".
  static CanonicalCode fromHistogram(const ValueHistogram& histogram);

  // Reconstructs a code from its canonical (value, length) pairs, e.g.
  // when loading a serialized index. Lengths must be non-decreasing and
  // satisfy Kraft equality (or the single-value convention).
  static CanonicalCode fromCanonical(std::vector<uint64_t> values,
                                     std::vector<uint8_t> lengths);

  uint32_t numSymbols() const {
    return static_cast<uint32_t>(symbols_.size());
  }
  uint8_t maxLength() const { return max_length_; }

  // Values, lengths and codewords in canonical order.
  const std::vector<uint64_t>& symbols() const { return symbols_; }
  const std::vector<uint8_t>& lengths() const { return lengths_; }
  const std::vector<Codeword>& codewords() const { return codewords_; }

  const Codeword& codewordFor(uint64_t value) const;
  uint8_t lengthFor(uint64_t value) const { return codewordFor(value).length; }

  // Decodes one value from a bit source (a callable returning the next
  // bit as bool). Throws CorruptPayloadError if the bits do not form a
  // valid codeword within maxLength() bits.
  template <typename NextBit>
  uint64_t decodeOne(NextBit&& next_bit) const {
    uint64_t code = 0;
    for (int length = 1; length <= max_length_; length++) {
      code = (code << 1) | static_cast<uint64_t>(next_bit());
      const uint64_t offset = code - first_code_[length];
      if (code >= first_code_[length] && offset < count_[length]) {
        return symbols_[first_index_[length] + offset];
      }
    }
    throw CorruptPayloadError("invalid prefix-code bit sequence");
  }

 private:
  CanonicalCode() = default;

  // Derives codewords, decode tables and the encode map from canonical
  // (symbols_, lengths_).
  void finalize();

  std::vector<uint64_t> symbols_;
  std::vector<uint8_t> lengths_;
  std::vector<Codeword> codewords_;  // aligned with symbols_
  uint8_t max_length_ = 0;

  // First-code decode tables indexed by length.
  uint64_t first_code_[kMaxCodeLength + 1] = {};
  uint64_t count_[kMaxCodeLength + 1] = {};
  uint32_t first_index_[kMaxCodeLength + 1] = {};

  std::unordered_map<uint64_t, uint32_t> encode_index_;
};

// Mean codeword length weighted by histogram frequencies, in bits per key.
double avgCodeLength(const CanonicalCode& code,
                     const ValueHistogram& histogram);

// Exact total of frequency * codeword length over the histogram: the
// number of GF(2) equations a CSF build will generate.
uint64_t totalCodeBits(const CanonicalCode& code,
                       const ValueHistogram& histogram);

}  // namespace autocsf
