#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <autocsf/bit_array.h>
#include <autocsf/byte_io.h>
#include <autocsf/dataset.h>
#include <autocsf/hashing.h>
#include <autocsf/huffman.h>

namespace autocsf {

// Space overhead of the GF(2) construction over the entropy bound:
// variables per equation for 3- and 4-hash systems.
constexpr double kDelta3 = 1.089;
constexpr double kDelta4 = 1.024;

inline double deltaFor(int num_hashes) {
  return num_hashes == 4 ? kDelta4 : kDelta3;
}

// All keys are fingerprinted once with this seed; every other hash in the
// library is derived from the fingerprint.
constexpr uint64_t kKeyHashSeed = 0x41757443534600ULL;

inline Key128 fingerprintKey(const std::string& key) {
  return hashKey(key.data(), key.size(), kKeyHashSeed);
}

// Size breakdown of a serialized CSF, in bits.
struct CsfSizeReport {
  uint64_t total_bits = 0;       // serialized size * 8
  uint64_t array_bits = 0;       // GF(2) solution arrays
  uint64_t dictionary_bits = 0;  // D_V: value dictionary
  uint64_t length_bits = 0;      // D_e: per-value codeword lengths
  uint64_t metadata_bits = 0;    // headers + chunk records
  double bits_per_key = 0.0;
  double avg_code_length = 0.0;
};

// Compressed static function: maps each key of a fixed dataset to its
// value in close to the empirical entropy of the value distribution.
// Queries on keys outside the build set return an arbitrary value (or
// nullopt when the bits do not decode); a CSF stores no key material.
//
// Values are Huffman-coded; each codeword bit becomes one GF(2) equation
// over `num_hashes` positions of a bit array. Equations are sharded by
// key hash into chunks of roughly kChunkTargetEquations so the dense
// solver core stays small; each chunk solves (and reseeds on failure)
// independently.
class CsfIndex {
 public:
  static constexpr uint64_t kChunkTargetEquations = 1024;
  // Single-draw solvability at density 1/delta is roughly a coin flip
  // (the system sits at the satisfiability threshold), so per-chunk
  // failure decays ~0.5^attempts. 64 attempts puts it near 1e-22,
  // negligible even across millions of chunk builds in a sweep.
  static constexpr int kMaxChunkAttempts = 64;

  static CsfIndex build(const KeyValueDataset& dataset, int num_hashes,
                        uint64_t seed);

  // Build from pre-fingerprinted keys (the AutoCSF wrapper hashes keys
  // once and reuses the fingerprints for both the filter and the CSF).
  static CsfIndex buildHashed(const std::vector<Key128>& fingerprints,
                              const std::vector<uint64_t>& values,
                              int num_hashes, uint64_t seed);

  std::optional<uint64_t> query(const std::string& key) const {
    return queryHashed(fingerprintKey(key));
  }
  std::optional<uint64_t> queryHashed(const Key128& fingerprint) const;

  uint64_t numKeys() const { return num_keys_; }
  int numHashes() const { return num_hashes_; }
  double delta() const { return deltaFor(num_hashes_); }
  uint64_t buildSeed() const { return build_seed_; }
  const CanonicalCode& code() const { return code_; }
  uint32_t numChunks() const {
    return static_cast<uint32_t>(chunk_num_vars_.size());
  }

  CsfSizeReport sizeReport() const;

  void serialize(ByteWriter& out) const;
  static CsfIndex deserialize(ByteReader& in);

 private:
  CsfIndex() = default;

  CanonicalCode code_{CanonicalCode::fromCanonical({0}, {1})};
  int num_hashes_ = 3;
  uint8_t value_bytes_ = 1;
  uint64_t num_keys_ = 0;
  uint64_t total_equations_ = 0;
  uint64_t build_seed_ = 0;
  uint32_t chunk_vars_base_ = 0;

  std::vector<uint32_t> chunk_num_vars_;
  std::vector<uint8_t> chunk_attempts_;
  std::vector<uint64_t> chunk_offsets_;  // prefix sums of chunk_num_vars_
  BitArray solution_;                    // all chunk arrays, concatenated
};

}  // namespace autocsf
