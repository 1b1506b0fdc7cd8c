#include <autocsf/filters.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include <autocsf/errors.h>

namespace autocsf {

namespace {

constexpr int kFilterBuildAttempts = 16;

constexpr uint64_t kBloomSalt1 = 0x626c6f6f6d310000ULL;
constexpr uint64_t kBloomSalt2 = 0x626c6f6f6d320000ULL;
constexpr uint64_t kXorSalt0 = 0x786f723000000000ULL;
constexpr uint64_t kXorSalt1 = 0x786f723100000000ULL;
constexpr uint64_t kXorSalt2 = 0x786f723200000000ULL;
constexpr uint64_t kXorSaltF = 0x786f726600000000ULL;

double bitCastToDouble(uint64_t bits) {
  double d;
  std::memcpy(&d, &bits, sizeof(d));
  return d;
}

uint64_t bitCastToWord(double d) {
  uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  return bits;
}

void writeSpecHeader(ByteWriter& out, const FilterSpec& spec) {
  out.writeU8(static_cast<uint8_t>(spec.family));
  switch (spec.family) {
    case FilterFamily::kBloom:
      out.writeU8(static_cast<uint8_t>(spec.hash_count));
      out.writeU64(bitCastToWord(spec.bits_per_entry));
      break;
    case FilterFamily::kXor:
    case FilterFamily::kBinaryFuse:
      out.writeU8(static_cast<uint8_t>(spec.fingerprint_bits));
      break;
  }
}

FilterSpec readSpecHeader(ByteReader& in) {
  const uint8_t family = in.readU8();
  switch (family) {
    case 0: {
      const int k = in.readU8();
      const double bpe = bitCastToDouble(in.readU64());
      if (k < 1 || k > 64 || !(bpe > 0) || !(bpe < 1e6)) {
        throw CorruptPayloadError("Bloom filter parameters out of range");
      }
      return bloomSpec(k, bpe);
    }
    case 1: {
      const int f = in.readU8();
      if (f < 1 || f > 16) {
        throw CorruptPayloadError("Xor filter fingerprint bits out of range");
      }
      return xorSpec(f);
    }
    case 2: {
      const int f = in.readU8();
      if (f < 1 || f > 16) {
        throw CorruptPayloadError(
            "binary fuse filter fingerprint bits out of range");
      }
      return binaryFuseSpec(f);
    }
    default:
      throw CorruptPayloadError("unknown filter family tag");
  }
}

// ---------------------------------------------------------------------------
// Bloom

class BloomFilter final : public MembershipFilter {
 public:
  BloomFilter(const FilterSpec& spec, const std::vector<Key128>& keys,
              uint64_t seed)
      : spec_(spec), seed_(seed), num_entries_(keys.size()) {
    const uint64_t num_bits = static_cast<uint64_t>(
        std::ceil(spec.bits_per_entry * static_cast<double>(keys.size())));
    bits_ = BitArray(std::max<uint64_t>(num_bits, keys.empty() ? 0 : 64));
    for (const Key128& key : keys) {
      uint64_t g1, g2;
      probeBasis(key, g1, g2);
      for (int i = 0; i < spec_.hash_count; i++) {
        bits_.set(position(g1, g2, i), true);
      }
    }
  }

  BloomFilter(const FilterSpec& spec, uint64_t seed, uint64_t num_entries,
              BitArray bits)
      : spec_(spec),
        seed_(seed),
        num_entries_(num_entries),
        bits_(std::move(bits)) {}

  bool containsHashed(const Key128& fingerprint) const override {
    if (bits_.numBits() == 0) {
      return false;
    }
    uint64_t g1, g2;
    probeBasis(fingerprint, g1, g2);
    for (int i = 0; i < spec_.hash_count; i++) {
      if (!bits_.get(position(g1, g2, i))) {
        return false;
      }
    }
    return true;
  }

  uint64_t numEntries() const override { return num_entries_; }
  const FilterSpec& spec() const override { return spec_; }

  void serialize(ByteWriter& out) const override {
    writeSpecHeader(out, spec_);
    out.writeU64(seed_);
    out.writeU64(num_entries_);
    out.writeU64(bits_.numBits());
    out.writeBytes(bits_.words(), bits_.numWords() * 8);
  }

 private:
  void probeBasis(const Key128& fp, uint64_t& g1, uint64_t& g2) const {
    g1 = mixWithSeed(seed_ ^ kBloomSalt1, fp.hi);
    g2 = mixWithSeed(seed_ ^ kBloomSalt2, fp.lo) | 1;
  }

  uint64_t position(uint64_t g1, uint64_t g2, int i) const {
    return (g1 + static_cast<uint64_t>(i) * g2) % bits_.numBits();
  }

  FilterSpec spec_;
  uint64_t seed_;
  uint64_t num_entries_;
  BitArray bits_;
};

// ---------------------------------------------------------------------------
// Xor filter (3-partite, 1.23x + 32 slots)

struct XorLayout {
  uint64_t segment = 0;  // slots per third

  explicit XorLayout(uint64_t n) {
    if (n == 0) {
      return;
    }
    const uint64_t slots =
        32 + static_cast<uint64_t>(std::ceil(1.23 * static_cast<double>(n)));
    segment = (slots + 2) / 3;
  }

  uint64_t numSlots() const { return 3 * segment; }
};

class XorFilter final : public MembershipFilter {
 public:
  XorFilter(const FilterSpec& spec, uint64_t seed, uint64_t num_entries,
            std::vector<uint16_t> fingerprints)
      : spec_(spec),
        seed_(seed),
        num_entries_(num_entries),
        layout_(num_entries),
        fingerprints_(std::move(fingerprints)) {}

  bool containsHashed(const Key128& fp) const override {
    if (num_entries_ == 0) {
      return false;
    }
    uint64_t pos[3];
    positions(fp, pos);
    const uint16_t expected = keyFingerprint(fp);
    return (fingerprints_[pos[0]] ^ fingerprints_[pos[1]] ^
            fingerprints_[pos[2]]) == expected;
  }

  uint64_t numEntries() const override { return num_entries_; }
  const FilterSpec& spec() const override { return spec_; }

  void serialize(ByteWriter& out) const override {
    writeSpecHeader(out, spec_);
    out.writeU64(seed_);
    out.writeU64(num_entries_);
    BitWriter bits;
    for (uint16_t f : fingerprints_) {
      bits.writeBits(f, spec_.fingerprint_bits);
    }
    bits.flushTo(out);
  }

  void positions(const Key128& fp, uint64_t* pos) const {
    const uint64_t u0 = mixWithSeed(seed_ ^ kXorSalt0, fp.hi);
    const uint64_t u1 = mixWithSeed(seed_ ^ kXorSalt1, fp.lo);
    const uint64_t u2 = mixWithSeed(seed_ ^ kXorSalt2, fp.hi ^ fp.lo);
    pos[0] = mapToRange(u0, layout_.segment);
    pos[1] = layout_.segment + mapToRange(u1, layout_.segment);
    pos[2] = 2 * layout_.segment + mapToRange(u2, layout_.segment);
  }

  uint16_t keyFingerprint(const Key128& fp) const {
    const uint64_t w = mixWithSeed(seed_ ^ kXorSaltF, fp.lo ^ fp.hi);
    return static_cast<uint16_t>(w & ((1ULL << spec_.fingerprint_bits) - 1));
  }

 private:
  FilterSpec spec_;
  uint64_t seed_;
  uint64_t num_entries_;
  XorLayout layout_;
  std::vector<uint16_t> fingerprints_;
};

// ---------------------------------------------------------------------------
// Binary fuse filter (3-wise, consecutive-segment windows)

struct FuseLayout {
  uint64_t segment_length = 1;
  int segment_length_log2 = 0;
  uint64_t segment_count_length = 1;
  uint64_t array_length = 0;

  explicit FuseLayout(uint64_t n) {
    if (n == 0) {
      return;
    }
    // Published reference sizing for 3-wise binary fuse filters.
    const double size = static_cast<double>(std::max<uint64_t>(n, 2));
    segment_length_log2 = static_cast<int>(
        std::floor(std::log(size) / std::log(3.33) + 2.25));
    segment_length_log2 = std::clamp(segment_length_log2, 2, 18);
    segment_length = 1ULL << segment_length_log2;
    const double factor =
        std::max(1.125, 0.875 + 0.25 * std::log(1e6) / std::log(size));
    const uint64_t capacity =
        static_cast<uint64_t>(std::llround(size * factor));
    const uint64_t init_segments = std::max<uint64_t>(
        1, (capacity + segment_length - 1) / segment_length - 2);
    segment_count_length = init_segments * segment_length;
    array_length = (init_segments + 2) * segment_length;
  }
};

class BinaryFuseFilter final : public MembershipFilter {
 public:
  BinaryFuseFilter(const FilterSpec& spec, uint64_t seed, uint64_t num_entries,
                   std::vector<uint16_t> fingerprints)
      : spec_(spec),
        seed_(seed),
        num_entries_(num_entries),
        layout_(num_entries),
        fingerprints_(std::move(fingerprints)) {}

  bool containsHashed(const Key128& fp) const override {
    if (num_entries_ == 0) {
      return false;
    }
    uint64_t pos[3];
    positions(fp, pos);
    const uint16_t expected = keyFingerprint(fp);
    return (fingerprints_[pos[0]] ^ fingerprints_[pos[1]] ^
            fingerprints_[pos[2]]) == expected;
  }

  uint64_t numEntries() const override { return num_entries_; }
  const FilterSpec& spec() const override { return spec_; }

  void serialize(ByteWriter& out) const override {
    writeSpecHeader(out, spec_);
    out.writeU64(seed_);
    out.writeU64(num_entries_);
    BitWriter bits;
    for (uint16_t f : fingerprints_) {
      bits.writeBits(f, spec_.fingerprint_bits);
    }
    bits.flushTo(out);
  }

  // Three positions in consecutive length-L segments of a window chosen
  // by the key; in-segment offsets are independent derived words.
  void positions(const Key128& fp, uint64_t* pos) const {
    const uint64_t base =
        mixWithSeed(mixWithSeed(seed_, fp.hi), fp.lo);
    const uint64_t start = mapToRange(base, layout_.segment_count_length);
    const uint64_t mask = layout_.segment_length - 1;
    pos[0] = start;
    pos[1] = (start + layout_.segment_length) ^ (mixWithSeed(base, 1) & mask);
    pos[2] =
        (start + 2 * layout_.segment_length) ^ (mixWithSeed(base, 2) & mask);
  }

  uint16_t keyFingerprint(const Key128& fp) const {
    const uint64_t base = mixWithSeed(mixWithSeed(seed_, fp.hi), fp.lo);
    const uint64_t w = mixWithSeed(base, 3);
    return static_cast<uint16_t>(w & ((1ULL << spec_.fingerprint_bits) - 1));
  }

 private:
  FilterSpec spec_;
  uint64_t seed_;
  uint64_t num_entries_;
  FuseLayout layout_;
  std::vector<uint16_t> fingerprints_;
};

// ---------------------------------------------------------------------------
// Shared peel-and-assign construction for fingerprint filters.

// Positions callback: fills pos[0..2] for a key under the current seed.
template <typename Filter>
std::unique_ptr<MembershipFilter> buildFingerprintFilter(
    const FilterSpec& spec, const std::vector<Key128>& keys, uint64_t seed,
    uint64_t num_slots) {
  const uint64_t n = keys.size();
  if (n == 0) {
    return std::make_unique<Filter>(spec, seed, 0, std::vector<uint16_t>{});
  }

  for (int attempt = 0; attempt < kFilterBuildAttempts; attempt++) {
    const uint64_t attempt_seed = mixWithSeed(seed, attempt);
    // Probe instance used only for position/fingerprint derivation.
    Filter probe(spec, attempt_seed, n, std::vector<uint16_t>{});

    std::vector<uint64_t> key_pos(3 * n);
    std::vector<uint32_t> count(num_slots, 0);
    std::vector<uint64_t> xor_ids(num_slots, 0);
    for (uint64_t i = 0; i < n; i++) {
      probe.positions(keys[i], &key_pos[3 * i]);
      for (int j = 0; j < 3; j++) {
        count[key_pos[3 * i + j]]++;
        xor_ids[key_pos[3 * i + j]] ^= i;
      }
    }

    std::vector<uint64_t> queue;
    for (uint64_t s = 0; s < num_slots; s++) {
      if (count[s] == 1) {
        queue.push_back(s);
      }
    }
    std::vector<std::pair<uint64_t, uint64_t>> order;  // (key, slot)
    order.reserve(n);
    while (!queue.empty()) {
      const uint64_t s = queue.back();
      queue.pop_back();
      if (count[s] != 1) {
        continue;
      }
      const uint64_t key = xor_ids[s];
      order.push_back({key, s});
      for (int j = 0; j < 3; j++) {
        const uint64_t p = key_pos[3 * key + j];
        count[p]--;
        xor_ids[p] ^= key;
        if (count[p] == 1) {
          queue.push_back(p);
        }
      }
    }

    if (order.size() != n) {
      continue;  // peel failed; reseed
    }

    std::vector<uint16_t> table(num_slots, 0);
    for (size_t i = order.size(); i-- > 0;) {
      const auto [key, slot] = order[i];
      const uint64_t* pos = &key_pos[3 * key];
      uint16_t value = probe.keyFingerprint(keys[key]);
      for (int j = 0; j < 3; j++) {
        if (pos[j] != slot) {
          value ^= table[pos[j]];
        }
      }
      table[slot] = value;
    }
    return std::make_unique<Filter>(spec, attempt_seed, n, std::move(table));
  }
  throw UnsolvableSystemError(
      std::string(filterFamilyName(spec.family)) +
      " filter construction failed after reseeding");
}

std::vector<uint16_t> readPackedFingerprints(ByteReader& in, uint64_t slots,
                                             int width) {
  std::vector<uint8_t> packed((slots * width + 7) / 8);
  in.readBytes(packed.data(), packed.size());
  BitReader bits(packed.data(), packed.size());
  std::vector<uint16_t> table(slots);
  for (uint64_t i = 0; i < slots; i++) {
    table[i] = static_cast<uint16_t>(bits.readBits(width));
  }
  return table;
}

}  // namespace

const char* filterFamilyName(FilterFamily family) {
  switch (family) {
    case FilterFamily::kBloom: return "bloom";
    case FilterFamily::kXor: return "xor";
    case FilterFamily::kBinaryFuse: return "binaryfuse";
  }
  return "unknown";
}

std::string FilterSpec::describe() const {
  char buffer[64];
  switch (family) {
    case FilterFamily::kBloom:
      std::snprintf(buffer, sizeof(buffer), "bloom(k=%d,bpe=%g)", hash_count,
                    bits_per_entry);
      break;
    case FilterFamily::kXor:
      std::snprintf(buffer, sizeof(buffer), "xor(f=%d)", fingerprint_bits);
      break;
    case FilterFamily::kBinaryFuse:
      std::snprintf(buffer, sizeof(buffer), "binaryfuse(f=%d)",
                    fingerprint_bits);
      break;
  }
  return buffer;
}

FilterSpec bloomSpec(int hash_count, double bits_per_entry) {
  if (hash_count < 1) {
    throw InvalidArgumentError("bloomSpec: hash count must be >= 1");
  }
  if (!(bits_per_entry > 0)) {
    throw InvalidArgumentError("bloomSpec: bits per entry must be positive");
  }
  FilterSpec spec;
  spec.family = FilterFamily::kBloom;
  spec.hash_count = hash_count;
  spec.bits_per_entry = bits_per_entry;
  spec.eps = std::pow(1.0 - std::exp(-hash_count / bits_per_entry),
                      hash_count);
  spec.bpk = bits_per_entry;
  return spec;
}

FilterSpec xorSpec(int fingerprint_bits) {
  if (fingerprint_bits < 1 || fingerprint_bits > 16) {
    throw InvalidArgumentError("xorSpec: fingerprint bits must be in [1, 16]");
  }
  FilterSpec spec;
  spec.family = FilterFamily::kXor;
  spec.fingerprint_bits = fingerprint_bits;
  spec.eps = std::ldexp(1.0, -fingerprint_bits);
  spec.bpk = 1.23 * fingerprint_bits;
  return spec;
}

FilterSpec binaryFuseSpec(int fingerprint_bits) {
  if (fingerprint_bits < 1 || fingerprint_bits > 16) {
    throw InvalidArgumentError(
        "binaryFuseSpec: fingerprint bits must be in [1, 16]");
  }
  FilterSpec spec;
  spec.family = FilterFamily::kBinaryFuse;
  spec.fingerprint_bits = fingerprint_bits;
  spec.eps = std::ldexp(1.0, -fingerprint_bits);
  spec.bpk = 1.125 * fingerprint_bits;
  return spec;
}

std::vector<FilterSpec> enumerateSpecs(
    const std::vector<FilterFamily>& families) {
  const auto wanted = [&](FilterFamily f) {
    return std::find(families.begin(), families.end(), f) != families.end();
  };
  std::vector<FilterSpec> specs;
  if (wanted(FilterFamily::kBloom)) {
    for (int k = 1; k <= 8; k++) {
      for (int bpe = 2; bpe <= 24; bpe++) {
        specs.push_back(bloomSpec(k, bpe));
      }
    }
  }
  if (wanted(FilterFamily::kXor)) {
    for (int f = 1; f <= 16; f++) {
      specs.push_back(xorSpec(f));
    }
  }
  if (wanted(FilterFamily::kBinaryFuse)) {
    for (int f = 1; f <= 16; f++) {
      specs.push_back(binaryFuseSpec(f));
    }
  }
  return specs;
}

std::vector<FilterSpec> enumerateAllSpecs() {
  return enumerateSpecs(
      {FilterFamily::kBloom, FilterFamily::kXor, FilterFamily::kBinaryFuse});
}

std::unique_ptr<MembershipFilter> buildFilter(const FilterSpec& spec,
                                              const std::vector<Key128>& keys,
                                              uint64_t seed) {
  switch (spec.family) {
    case FilterFamily::kBloom:
      return std::make_unique<BloomFilter>(spec, keys, seed);
    case FilterFamily::kXor:
      return buildFingerprintFilter<XorFilter>(spec, keys, seed,
                                               XorLayout(keys.size()).numSlots());
    case FilterFamily::kBinaryFuse:
      return buildFingerprintFilter<BinaryFuseFilter>(
          spec, keys, seed, FuseLayout(keys.size()).array_length);
  }
  throw InvalidArgumentError("buildFilter: unknown filter family");
}

std::unique_ptr<MembershipFilter> deserializeFilter(ByteReader& in) {
  const FilterSpec spec = readSpecHeader(in);
  const uint64_t seed = in.readU64();
  const uint64_t num_entries = in.readU64();
  switch (spec.family) {
    case FilterFamily::kBloom: {
      const uint64_t num_bits = in.readU64();
      if (num_bits > (1ULL << 40)) {
        throw CorruptPayloadError("Bloom filter size out of range");
      }
      BitArray bits(num_bits);
      in.readBytes(bits.words(), bits.numWords() * 8);
      return std::make_unique<BloomFilter>(spec, seed, num_entries,
                                           std::move(bits));
    }
    case FilterFamily::kXor: {
      const uint64_t slots = XorLayout(num_entries).numSlots();
      return std::make_unique<XorFilter>(
          spec, seed, num_entries,
          readPackedFingerprints(in, slots, spec.fingerprint_bits));
    }
    case FilterFamily::kBinaryFuse: {
      const uint64_t slots = FuseLayout(num_entries).array_length;
      return std::make_unique<BinaryFuseFilter>(
          spec, seed, num_entries,
          readPackedFingerprints(in, slots, spec.fingerprint_bits));
    }
  }
  throw CorruptPayloadError("unknown filter family");
}

}  // namespace autocsf
