#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <autocsf/byte_io.h>
#include <autocsf/csf.h>
#include <autocsf/hashing.h>

namespace autocsf {

enum class FilterFamily : uint8_t {
  kBloom = 0,
  kXor = 1,
  kBinaryFuse = 2,
};

const char* filterFamilyName(FilterFamily family);

// One point of a filter family's discrete configuration space, together
// with its closed-form cost model: false-positive rate eps and bits per
// stored key b(eps).
struct FilterSpec {
  FilterFamily family = FilterFamily::kBloom;
  int hash_count = 0;         // Bloom: k
  double bits_per_entry = 0;  // Bloom: bpe (real-valued)
  int fingerprint_bits = 0;   // Xor / BinaryFuse: f
  double eps = 0;             // model false-positive rate
  double bpk = 0;             // model bits per stored key b(eps)

  std::string describe() const;  // e.g. "bloom(k=2,bpe=8)", "xor(f=7)"
};

// Model constructors. eps and bpk are pure functions of the parameters:
//   Bloom:      eps = (1 - e^{-k/bpe})^k,  b = bpe
//   Xor:        eps = 2^{-f},              b = 1.23 f
//   BinaryFuse: eps = 2^{-f},              b = 1.125 f
FilterSpec bloomSpec(int hash_count, double bits_per_entry);
FilterSpec xorSpec(int fingerprint_bits);
FilterSpec binaryFuseSpec(int fingerprint_bits);

// Full discrete grids: Bloom k in {1..8} x bpe in {2..24}; Xor and
// BinaryFuse f in {1..16}. Ordered by family (Bloom < Xor < BinaryFuse),
// then parameters ascending.
std::vector<FilterSpec> enumerateSpecs(const std::vector<FilterFamily>& families);
std::vector<FilterSpec> enumerateAllSpecs();

// Immutable approximate-membership filter: no false negatives, false
// positives at roughly spec().eps.
class MembershipFilter {
 public:
  virtual ~MembershipFilter() = default;

  virtual bool containsHashed(const Key128& fingerprint) const = 0;
  bool contains(const std::string& key) const {
    return containsHashed(fingerprintKey(key));
  }

  virtual uint64_t numEntries() const = 0;
  virtual const FilterSpec& spec() const = 0;
  virtual void serialize(ByteWriter& out) const = 0;

  // Serialized footprint (storage plus format metadata).
  uint64_t sizeBits() const {
    ByteWriter writer;
    serialize(writer);
    return writer.size() * 8;
  }
};

// Builds a filter over pre-fingerprinted keys. Keys must be distinct.
// Xor/BinaryFuse constructions retry with derived seeds (at most 16) on
// peel failure and throw UnsolvableSystemError past the budget.
std::unique_ptr<MembershipFilter> buildFilter(const FilterSpec& spec,
                                              const std::vector<Key128>& keys,
                                              uint64_t seed);

std::unique_ptr<MembershipFilter> deserializeFilter(ByteReader& in);

}  // namespace autocsf
