#include <autocsf/auto_csf.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

#include <autocsf/errors.h>

namespace autocsf {

namespace {

constexpr uint32_t kAutoMagic = 0x46534341;  // "ACSF"
constexpr uint8_t kAutoVersion = 1;
constexpr uint8_t kVariantPlain = 0;
constexpr uint8_t kVariantFiltered = 1;

constexpr uint64_t kFilterSeedSalt = 0x66696c7465722d31ull;
constexpr uint64_t kCsfSeedSalt = 0x6373662d7365656dull;

uint64_t filterSeed(uint64_t seed) { return mixWithSeed(seed, kFilterSeedSalt); }
uint64_t csfSeed(uint64_t seed) { return mixWithSeed(seed, kCsfSeedSalt); }

}  // namespace

double lowerBound(double alpha, double delta, const FilterSpec& spec,
                  double n_over_N) {
  return alpha * delta * (1.0 - spec.eps) - (1.0 - alpha) * spec.bpk - n_over_N;
}

double upperBound(double alpha, double delta, const FilterSpec& spec,
                  double n_over_N) {
  return 2.0 * delta - 0.5 * alpha * delta * spec.eps + n_over_N -
         spec.bpk * (1.0 - alpha);
}

BoundReport decide(const ValueHistogram& histogram, int num_hashes,
                   const std::vector<FilterSpec>& specs) {
  if (specs.empty()) {
    throw InvalidArgumentError("decide: spec grid is empty");
  }
  BoundReport report;
  report.alpha = histogram.dominantFraction();
  // n is the vocabulary size: distinct values over the full dataset.
  report.n_over_N =
      histogram.num_keys == 0
          ? 0.0
          : static_cast<double>(histogram.numDistinct()) /
                static_cast<double>(histogram.num_keys);
  report.delta = deltaFor(num_hashes);
  report.rows.reserve(specs.size());
  for (const FilterSpec& spec : specs) {
    BoundRow row;
    row.spec = spec;
    row.lb = lowerBound(report.alpha, report.delta, spec, report.n_over_N);
    row.ub = upperBound(report.alpha, report.delta, spec, report.n_over_N);
    report.rows.push_back(row);
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(report.rows.size()); i++) {
    const BoundRow& cand = report.rows[i];
    const BoundRow& cur = report.rows[best];
    if (cand.lb > cur.lb) {
      best = i;
    } else if (cand.lb == cur.lb) {
      if (cand.spec.bpk < cur.spec.bpk ||
          (cand.spec.bpk == cur.spec.bpk && cand.spec.family < cur.spec.family)) {
        best = i;
      }
    }
  }
  report.best_index = best;
  report.use_filter = report.rows[best].lb > 0.0;
  return report;
}

std::optional<uint64_t> AutoIndex::queryHashed(const Key128& fingerprint) const {
  if (filter_) {
    if (!filter_->containsHashed(fingerprint)) {
      return majority_value_;
    }
    if (!csf_) {
      return majority_value_;
    }
    return csf_->queryHashed(fingerprint);
  }
  return csf_->queryHashed(fingerprint);
}

uint64_t AutoIndex::sizeBits() const {
  ByteWriter out;
  serialize(out);
  return static_cast<uint64_t>(out.size()) * 8;
}

void AutoIndex::serialize(ByteWriter& out) const {
  out.writeU32(kAutoMagic);
  out.writeU8(kAutoVersion);
  out.writeU8(filter_ ? kVariantFiltered : kVariantPlain);
  out.writeU8(static_cast<uint8_t>(key_mode_));
  out.writeU8(static_cast<uint8_t>(kmer_k_));
  out.writeU64(majority_value_);
  out.writeU64(num_keys_);
  if (filter_) {
    filter_->serialize(out);
    out.writeU8(csf_ ? 1 : 0);
    if (csf_) {
      csf_->serialize(out);
    }
  } else {
    csf_->serialize(out);
  }
}

AutoIndex AutoIndex::deserialize(ByteReader& in) {
  if (in.readU32() != kAutoMagic) {
    throw CorruptPayloadError("AutoIndex: bad magic");
  }
  if (in.readU8() != kAutoVersion) {
    throw CorruptPayloadError("AutoIndex: unsupported version");
  }
  const uint8_t variant = in.readU8();
  if (variant != kVariantPlain && variant != kVariantFiltered) {
    throw CorruptPayloadError("AutoIndex: unknown variant");
  }
  const uint8_t mode = in.readU8();
  if (mode > static_cast<uint8_t>(KeyMode::kPackedKmer)) {
    throw CorruptPayloadError("AutoIndex: unknown key mode");
  }
  AutoIndex index;
  index.key_mode_ = static_cast<KeyMode>(mode);
  index.kmer_k_ = in.readU8();
  index.majority_value_ = in.readU64();
  index.num_keys_ = in.readU64();
  if (variant == kVariantFiltered) {
    index.filter_ = deserializeFilter(in);
    const uint8_t has_csf = in.readU8();
    if (has_csf > 1) {
      throw CorruptPayloadError("AutoIndex: bad csf flag");
    }
    if (has_csf) {
      index.csf_ = CsfIndex::deserialize(in);
    }
  } else {
    index.csf_ = CsfIndex::deserialize(in);
  }
  return index;
}

void AutoIndex::saveFile(const std::string& path) const {
  ByteWriter out;
  serialize(out);
  std::ofstream stream(path, std::ios::binary | std::ios::trunc);
  if (!stream) {
    throw AutoCsfError("cannot open for writing: " + path);
  }
  const std::vector<uint8_t>& bytes = out.bytes();
  stream.write(reinterpret_cast<const char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()));
  if (!stream) {
    throw AutoCsfError("write failed: " + path);
  }
}

AutoIndex AutoIndex::loadFile(const std::string& path) {
  std::ifstream stream(path, std::ios::binary | std::ios::ate);
  if (!stream) {
    throw AutoCsfError("cannot open for reading: " + path);
  }
  const std::streamsize size = stream.tellg();
  stream.seekg(0);
  std::vector<uint8_t> bytes(static_cast<size_t>(size));
  if (size > 0) {
    stream.read(reinterpret_cast<char*>(bytes.data()), size);
  }
  if (!stream) {
    throw AutoCsfError("read failed: " + path);
  }
  ByteReader reader(bytes);
  return deserialize(reader);
}

AutoIndex AutoIndex::makePlain(CsfIndex csf, uint64_t majority_value,
                               uint64_t num_keys) {
  AutoIndex index;
  index.majority_value_ = majority_value;
  index.num_keys_ = num_keys;
  index.csf_ = std::move(csf);
  return index;
}

AutoIndex AutoIndex::makeFiltered(std::unique_ptr<MembershipFilter> filter,
                                  std::optional<CsfIndex> csf,
                                  uint64_t majority_value, uint64_t num_keys,
                                  uint64_t passthrough_count) {
  AutoIndex index;
  index.majority_value_ = majority_value;
  index.num_keys_ = num_keys;
  index.passthrough_count_ = passthrough_count;
  index.filter_ = std::move(filter);
  index.csf_ = std::move(csf);
  return index;
}

AutoIndex buildPlainIndex(const KeyValueDataset& dataset, int num_hashes,
                          uint64_t seed) {
  std::vector<Key128> fingerprints;
  fingerprints.reserve(dataset.keys.size());
  for (const std::string& key : dataset.keys) {
    fingerprints.push_back(fingerprintKey(key));
  }
  return buildPlainIndexHashed(fingerprints, dataset.values, num_hashes, seed);
}

AutoIndex buildPlainIndexHashed(const std::vector<Key128>& fingerprints,
                                const std::vector<uint64_t>& values,
                                int num_hashes, uint64_t seed) {
  if (values.empty()) {
    throw InvalidArgumentError("buildPlainIndexHashed: empty dataset");
  }
  const ValueHistogram histogram = computeHistogram(values);
  CsfIndex csf =
      CsfIndex::buildHashed(fingerprints, values, num_hashes, csfSeed(seed));
  return AutoIndex::makePlain(std::move(csf), histogram.entries[0].value,
                              values.size());
}

AutoIndex buildFilteredIndexHashed(const std::vector<Key128>& fingerprints,
                                   const std::vector<uint64_t>& values,
                                   uint64_t majority_value,
                                   const FilterSpec& spec, int num_hashes,
                                   uint64_t seed) {
  if (values.empty()) {
    throw InvalidArgumentError("buildFilteredIndexHashed: empty dataset");
  }
  if (fingerprints.size() != values.size()) {
    throw InvalidArgumentError(
        "buildFilteredIndexHashed: keys/values length mismatch");
  }
  std::vector<Key128> minority_fps;
  std::vector<uint64_t> minority_values;
  std::vector<Key128> majority_fps;
  for (size_t i = 0; i < values.size(); i++) {
    if (values[i] == majority_value) {
      majority_fps.push_back(fingerprints[i]);
    } else {
      minority_fps.push_back(fingerprints[i]);
      minority_values.push_back(values[i]);
    }
  }
  std::unique_ptr<MembershipFilter> filter =
      buildFilter(spec, minority_fps, filterSeed(seed));

  // The CSF covers minority keys plus every majority key the filter
  // falsely accepts, so accepted queries still resolve exactly.
  std::vector<Key128> csf_fps = minority_fps;
  std::vector<uint64_t> csf_values = minority_values;
  uint64_t passthrough = 0;
  for (const Key128& fp : majority_fps) {
    if (filter->containsHashed(fp)) {
      csf_fps.push_back(fp);
      csf_values.push_back(majority_value);
      passthrough++;
    }
  }
  std::optional<CsfIndex> csf;
  if (!csf_fps.empty()) {
    csf = CsfIndex::buildHashed(csf_fps, csf_values, num_hashes, csfSeed(seed));
  }
  return AutoIndex::makeFiltered(std::move(filter), std::move(csf),
                                 majority_value, values.size(), passthrough);
}

AutoBuildResult buildAuto(const KeyValueDataset& dataset, int num_hashes,
                          const std::vector<FilterSpec>& specs, uint64_t seed) {
  std::vector<Key128> fingerprints;
  fingerprints.reserve(dataset.keys.size());
  for (const std::string& key : dataset.keys) {
    fingerprints.push_back(fingerprintKey(key));
  }
  return buildAutoHashed(fingerprints, dataset.values, num_hashes, specs, seed);
}

AutoBuildResult buildAutoHashed(const std::vector<Key128>& fingerprints,
                                const std::vector<uint64_t>& values,
                                int num_hashes,
                                const std::vector<FilterSpec>& specs,
                                uint64_t seed) {
  if (values.empty()) {
    throw InvalidArgumentError("buildAutoHashed: empty dataset");
  }
  const ValueHistogram histogram = computeHistogram(values);
  BoundReport report = decide(histogram, num_hashes, specs);
  AutoBuildResult result{
      report.use_filter
          ? buildFilteredIndexHashed(fingerprints, values,
                                     histogram.entries[0].value,
                                     report.best().spec, num_hashes, seed)
          : buildPlainIndexHashed(fingerprints, values, num_hashes, seed),
      std::move(report)};
  return result;
}

double measuredSavings(const KeyValueDataset& dataset, int num_hashes,
                       const FilterSpec& spec, uint64_t seed) {
  std::vector<Key128> fingerprints;
  fingerprints.reserve(dataset.keys.size());
  for (const std::string& key : dataset.keys) {
    fingerprints.push_back(fingerprintKey(key));
  }
  const ValueHistogram histogram = computeHistogram(dataset.values);
  const AutoIndex plain =
      buildPlainIndexHashed(fingerprints, dataset.values, num_hashes, seed);
  const AutoIndex filtered = buildFilteredIndexHashed(
      fingerprints, dataset.values, histogram.entries[0].value, spec,
      num_hashes, seed);
  return (static_cast<double>(plain.sizeBits()) -
          static_cast<double>(filtered.sizeBits())) /
         static_cast<double>(dataset.values.size());
}

}  // namespace autocsf
