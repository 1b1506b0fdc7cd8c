#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <autocsf/csf.h>
#include <autocsf/dataset.h>
#include <autocsf/filters.h>

namespace autocsf {

// Guaranteed per-key savings (bits/key) of a filtered CSF over a plain
// CSF at the given filter spec: alpha*delta*(1-eps) - (1-alpha)*b(eps)
// - n/N. Positive lower bound => filtering provably helps.
double lowerBound(double alpha, double delta, const FilterSpec& spec,
                  double n_over_N);

// Matching upper bound on the savings:
// 2*delta - 0.5*alpha*delta*eps + n/N - b(eps)*(1-alpha).
double upperBound(double alpha, double delta, const FilterSpec& spec,
                  double n_over_N);

struct BoundRow {
  FilterSpec spec;
  double lb = 0;
  double ub = 0;
};

// Bound evaluation across a discrete spec grid plus the filter/no-filter
// decision: filter iff the best lower bound is positive.
struct BoundReport {
  double alpha = 0;
  double n_over_N = 0;  // vocabulary size (distinct values) over N
  double delta = 0;
  std::vector<BoundRow> rows;  // one per enumerated spec, input order
  int best_index = -1;         // argmax of lb (see decide() for tie-breaks)
  bool use_filter = false;     // lb_star > 0

  const BoundRow& best() const { return rows[best_index]; }
  double lbStar() const { return rows[best_index].lb; }
  double ubStar() const { return rows[best_index].ub; }
};

// Evaluates lower_bound at every spec (no continuous optimization).
// best = argmax lb; ties broken by smaller model bpk, then by family
// order (Bloom < Xor < BinaryFuse), then by input order.
BoundReport decide(const ValueHistogram& histogram, int num_hashes,
                   const std::vector<FilterSpec>& specs);

enum class KeyMode : uint8_t {
  kRawBytes = 0,
  kPackedKmer = 1,
};

// The combined index container: either a plain CSF over the whole
// dataset, or a minority-key filter in front of a CSF over (minority keys
// + majority false positives). Exact for every built key; filter-negative
// queries return the majority value directly.
class AutoIndex {
 public:
  bool isFiltered() const { return filter_ != nullptr; }
  uint64_t majorityValue() const { return majority_value_; }
  uint64_t numKeys() const { return num_keys_; }

  const MembershipFilter* filter() const { return filter_.get(); }
  const CsfIndex* csf() const { return csf_ ? &*csf_ : nullptr; }

  // Count of majority keys the filter falsely accepted at build time
  // (f'0); zero for plain or loaded indexes.
  uint64_t passthroughCount() const { return passthrough_count_; }

  // Exact value for built keys. For out-of-set keys: some value, or
  // nullopt when the CSF bit stream fails to decode.
  std::optional<uint64_t> query(const std::string& key) const {
    return queryHashed(fingerprintKey(key));
  }
  std::optional<uint64_t> queryHashed(const Key128& fingerprint) const;

  // Serialized container footprint in bits; bpk = sizeBits / numKeys.
  uint64_t sizeBits() const;
  double bitsPerKey() const {
    return static_cast<double>(sizeBits()) / static_cast<double>(num_keys_);
  }

  // The key interpretation recorded at build time (raw byte strings vs
  // 2-bit-packed k-mers); consumers use it to encode query keys.
  KeyMode keyMode() const { return key_mode_; }
  int kmerK() const { return kmer_k_; }
  void setKeyMode(KeyMode mode, int k) {
    key_mode_ = mode;
    kmer_k_ = k;
  }

  void serialize(ByteWriter& out) const;
  static AutoIndex deserialize(ByteReader& in);

  void saveFile(const std::string& path) const;
  static AutoIndex loadFile(const std::string& path);

  static AutoIndex makePlain(CsfIndex csf, uint64_t majority_value,
                             uint64_t num_keys);
  static AutoIndex makeFiltered(std::unique_ptr<MembershipFilter> filter,
                                std::optional<CsfIndex> csf,
                                uint64_t majority_value, uint64_t num_keys,
                                uint64_t passthrough_count);

 private:
  AutoIndex() = default;

  KeyMode key_mode_ = KeyMode::kRawBytes;
  int kmer_k_ = 0;
  uint64_t majority_value_ = 0;
  uint64_t num_keys_ = 0;
  uint64_t passthrough_count_ = 0;
  std::unique_ptr<MembershipFilter> filter_;  // null => plain variant
  std::optional<CsfIndex> csf_;  // absent only for filtered, empty CSF set
};

// Plain CSF wrapped in the container (the no-filter baseline).
AutoIndex buildPlainIndex(const KeyValueDataset& dataset, int num_hashes,
                          uint64_t seed);
AutoIndex buildPlainIndexHashed(const std::vector<Key128>& fingerprints,
                                const std::vector<uint64_t>& values,
                                int num_hashes, uint64_t seed);

// Filtered index at a forced spec (used by sweeps and the BCSF baseline).
AutoIndex buildFilteredIndexHashed(const std::vector<Key128>& fingerprints,
                                   const std::vector<uint64_t>& values,
                                   uint64_t majority_value,
                                   const FilterSpec& spec, int num_hashes,
                                   uint64_t seed);

struct AutoBuildResult {
  AutoIndex index;
  BoundReport report;
};

// The AutoCSF algorithm: decide over the spec grid, then build either the
// plain or the filtered variant.
AutoBuildResult buildAuto(const KeyValueDataset& dataset, int num_hashes,
                          const std::vector<FilterSpec>& specs, uint64_t seed);
AutoBuildResult buildAutoHashed(const std::vector<Key128>& fingerprints,
                                const std::vector<uint64_t>& values,
                                int num_hashes,
                                const std::vector<FilterSpec>& specs,
                                uint64_t seed);

// (plain.size_bits - filtered.size_bits) / N for one spec on identical
// data and seed. Negative when the filter wastes space.
double measuredSavings(const KeyValueDataset& dataset, int num_hashes,
                       const FilterSpec& spec, uint64_t seed);

}  // namespace autocsf
