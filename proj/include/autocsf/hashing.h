#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string>

namespace autocsf {

// 128-bit key fingerprint. Every key is hashed exactly once at ingestion;
// all downstream randomness (chunk selection, equation indices, filter
// probes) is derived from this fingerprint with distinct seeds, so the
// query path never rehashes the raw key bytes.
struct Key128 {
  uint64_t hi = 0;
  uint64_t lo = 0;

  friend bool operator==(const Key128& a, const Key128& b) {
    return a.hi == b.hi && a.lo == b.lo;
  }
  friend bool operator!=(const Key128& a, const Key128& b) {
    return !(a == b);
  }
};

// Finalizer from MurmurHash3: bijective, high-quality avalanche.
inline uint64_t mix64(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

// Combines a seed with a value into a new 64-bit pseudo-random word.
inline uint64_t mixWithSeed(uint64_t seed, uint64_t value) {
  return mix64(seed ^ (value * 0x9e3779b97f4a7c15ULL));
}

// Maps a uniform 64-bit word onto [0, range) without modulo bias worth
// caring about (Lemire's multiply-shift).
inline uint64_t mapToRange(uint64_t word, uint64_t range) {
  return static_cast<uint64_t>(
      (static_cast<unsigned __int128>(word) * range) >> 64);
}

// MurmurHash3 x64 128-bit over arbitrary bytes, seeded.
Key128 hashKey(const void* data, size_t length, uint64_t seed);

inline Key128 hashKey(const std::string& key, uint64_t seed) {
  return hashKey(key.data(), key.size(), seed);
}

// splitmix64: tiny deterministic PRNG used for synthetic data generation
// and shuffles. Fully portable across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform draw from [0, bound). bound must be positive.
  uint64_t nextBounded(uint64_t bound) { return mapToRange(next(), bound); }

  // Uniform double in [0, 1).
  double nextDouble() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  uint64_t state_;
};

}  // namespace autocsf
