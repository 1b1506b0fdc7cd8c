#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <autocsf/hashing.h>

namespace autocsf {

// A static key -> value map to index. Keys are opaque byte strings; values
// are unsigned 64-bit identifiers (class labels, counts, ...).
struct KeyValueDataset {
  std::vector<std::string> keys;
  std::vector<uint64_t> values;

  size_t size() const { return keys.size(); }
};

// Value frequency statistics for a dataset. Entries are sorted by
// descending frequency, ties broken by ascending value, so entry 0 is the
// dominant value.
struct ValueHistogram {
  struct Entry {
    uint64_t value;
    uint64_t frequency;
  };

  std::vector<Entry> entries;
  uint64_t num_keys = 0;  // N: total keys.

  uint64_t numDistinct() const { return entries.size(); }

  // Dominant-value fraction f_0 / N.
  double dominantFraction() const {
    return entries.empty() ? 0.0
                           : static_cast<double>(entries[0].frequency) /
                                 static_cast<double>(num_keys);
  }

  // Empirical Shannon entropy of the value distribution, in bits.
  double entropy() const;

  // Largest value present (0 for an empty histogram).
  uint64_t maxValue() const;
};

ValueHistogram computeHistogram(const std::vector<uint64_t>& values);

inline ValueHistogram computeHistogram(const KeyValueDataset& dataset) {
  return computeHistogram(dataset.values);
}

// Minority-value laws for synthetic datasets.
enum class MinorityLaw {
  kUnique,    // every minority key gets a distinct value
  kZipf,      // Zipf(s) ranks over a large universe
  kUniform,   // uniform over m distinct values
};

struct MinoritySpec {
  MinorityLaw law = MinorityLaw::kUniform;
  double zipf_s = 1.5;     // exponent for kZipf; must be > 0
  uint64_t uniform_m = 1;  // distinct minority values for kUniform

  static MinoritySpec Unique() { return {MinorityLaw::kUnique, 0.0, 0}; }
  static MinoritySpec Zipf(double s) { return {MinorityLaw::kZipf, s, 0}; }
  static MinoritySpec Uniform(uint64_t m) {
    return {MinorityLaw::kUniform, 0.0, m};
  }
};

// Generates N distinct 16-byte keys; floor(alpha * N) of them share the
// majority value 0 and the rest draw positive minority values according to
// `minority`. Which keys carry which value is a seeded permutation, so the
// measured dominant fraction is exactly floor(alpha * N) / N.
KeyValueDataset genSynthetic(uint64_t num_keys, double alpha,
                             const MinoritySpec& minority, uint64_t seed);

// Keys guaranteed absent from any dataset generated with genSynthetic and
// num_keys <= ... (generation embeds the key index; probes use indices past
// 2^48, far beyond any generated dataset size).
std::vector<std::string> genProbeKeys(uint64_t count, uint64_t seed);

// Packs a k-mer (characters ACGT, k in [1, 32]) into 2-bit codes
// A=0, C=1, G=2, T=3, big-endian within the packed word.
uint64_t packKmer(const std::string& kmer);

// Serializes a packed k-mer into the ceil(2k/8)-byte big-endian key string
// used for hashing and lookups.
std::string kmerKeyBytes(uint64_t packed, int k);

// Loads a TSV table of lines "KMER\tCOUNT". Every k-mer must have length
// k over ACGT; counts are positive integers; duplicate k-mers are
// rejected. Keys in the returned dataset are packed big-endian byte
// strings (see kmerKeyBytes).
KeyValueDataset loadKmerTable(const std::string& path, int k);

}  // namespace autocsf
