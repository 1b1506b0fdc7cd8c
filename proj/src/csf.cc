#include <autocsf/csf.h>

#include <algorithm>
#include <cmath>

#include <autocsf/errors.h>
#include <autocsf/gf2.h>

namespace autocsf {

namespace {

constexpr uint32_t kCsfMagic = 0x31465343;  // "CSF1"
constexpr uint8_t kCsfVersion = 1;
constexpr int kChunkDeltaRiceK = 5;

uint64_t chunkSeed(uint64_t build_seed, uint32_t chunk, uint8_t attempt) {
  return mixWithSeed(mixWithSeed(build_seed, chunk), attempt);
}

// Draws `count` distinct positions in [0, num_vars) for one equation,
// deterministically from the key fingerprint and the codeword bit index.
void deriveEquation(const Key128& fp, uint32_t bit_index, uint64_t seed,
                    uint32_t num_vars, int count, uint32_t* out) {
  const uint64_t base =
      mixWithSeed(seed ^ fp.hi, fp.lo + bit_index * 0x9e3779b97f4a7c15ULL);
  int found = 0;
  for (uint64_t draw = 0; found < count; draw++) {
    if (draw > 1000) {
      throw UnsolvableSystemError(
          "equation derivation failed to find distinct positions");
    }
    const uint32_t candidate = static_cast<uint32_t>(
        mapToRange(mixWithSeed(base, draw), num_vars));
    bool duplicate = false;
    for (int i = 0; i < found; i++) {
      duplicate |= (out[i] == candidate);
    }
    if (!duplicate) {
      out[found++] = candidate;
    }
  }
}

uint32_t chunkOf(const Key128& fp, uint32_t num_chunks) {
  return static_cast<uint32_t>(mapToRange(fp.hi, num_chunks));
}

}  // namespace

CsfIndex CsfIndex::build(const KeyValueDataset& dataset, int num_hashes,
                         uint64_t seed) {
  std::vector<Key128> fingerprints;
  fingerprints.reserve(dataset.keys.size());
  for (const std::string& key : dataset.keys) {
    fingerprints.push_back(fingerprintKey(key));
  }
  return buildHashed(fingerprints, dataset.values, num_hashes, seed);
}

CsfIndex CsfIndex::buildHashed(const std::vector<Key128>& fingerprints,
                               const std::vector<uint64_t>& values,
                               int num_hashes, uint64_t seed) {
  if (fingerprints.size() != values.size()) {
    throw InvalidArgumentError("CsfIndex: keys and values differ in size");
  }
  if (fingerprints.empty()) {
    throw InvalidArgumentError("CsfIndex: cannot build from an empty dataset");
  }
  if (num_hashes != 3 && num_hashes != 4) {
    throw InvalidArgumentError("CsfIndex: num_hashes must be 3 or 4");
  }

  CsfIndex index;
  const ValueHistogram histogram = computeHistogram(values);
  index.code_ = CanonicalCode::fromHistogram(histogram);
  index.num_hashes_ = num_hashes;
  index.value_bytes_ = static_cast<uint8_t>(
      std::max(4, bytesForValue(histogram.maxValue())));
  index.num_keys_ = fingerprints.size();
  index.build_seed_ = seed;

  const double delta = deltaFor(num_hashes);
  const uint64_t total_equations = totalCodeBits(index.code_, histogram);
  index.total_equations_ = total_equations;
  const uint32_t num_chunks = static_cast<uint32_t>(std::max<uint64_t>(
      1, (total_equations + kChunkTargetEquations / 2) / kChunkTargetEquations));

  // Bucket keys by chunk (counting sort keeps build order deterministic).
  const uint64_t n = fingerprints.size();
  std::vector<uint32_t> key_chunk(n);
  std::vector<uint64_t> chunk_equations(num_chunks, 0);
  std::vector<uint64_t> bucket_start(num_chunks + 1, 0);
  for (uint64_t i = 0; i < n; i++) {
    const uint32_t c = chunkOf(fingerprints[i], num_chunks);
    key_chunk[i] = c;
    chunk_equations[c] += index.code_.lengthFor(values[i]);
    bucket_start[c + 1]++;
  }
  for (uint32_t c = 0; c < num_chunks; c++) {
    bucket_start[c + 1] += bucket_start[c];
  }
  std::vector<uint64_t> bucketed(n);
  {
    std::vector<uint64_t> cursor(bucket_start.begin(),
                                 bucket_start.end() - 1);
    for (uint64_t i = 0; i < n; i++) {
      bucketed[cursor[key_chunk[i]]++] = i;
    }
  }

  const uint32_t min_vars = static_cast<uint32_t>(num_hashes);
  index.chunk_vars_base_ = static_cast<uint32_t>(std::llround(
      delta * static_cast<double>(total_equations) / num_chunks));
  index.chunk_num_vars_.resize(num_chunks);
  index.chunk_attempts_.assign(num_chunks, 0);
  index.chunk_offsets_.assign(num_chunks + 1, 0);
  for (uint32_t c = 0; c < num_chunks; c++) {
    uint32_t vars = 0;
    if (chunk_equations[c] > 0) {
      vars = static_cast<uint32_t>(
          std::ceil(delta * static_cast<double>(chunk_equations[c]) - 1e-9));
      vars = std::max(vars, min_vars);
    }
    index.chunk_num_vars_[c] = vars;
    index.chunk_offsets_[c + 1] = index.chunk_offsets_[c] + vars;
  }
  index.solution_ = BitArray(index.chunk_offsets_[num_chunks]);

  uint32_t equation_vars[4];
  for (uint32_t c = 0; c < num_chunks; c++) {
    const uint32_t vars = index.chunk_num_vars_[c];
    if (vars == 0) {
      continue;
    }
    bool solved = false;
    for (int attempt = 0; attempt < kMaxChunkAttempts && !solved; attempt++) {
      const uint64_t cseed = chunkSeed(seed, c, static_cast<uint8_t>(attempt));
      Gf2System system(vars, num_hashes);
      system.reserve(chunk_equations[c]);
      for (uint64_t slot = bucket_start[c]; slot < bucket_start[c + 1];
           slot++) {
        const uint64_t i = bucketed[slot];
        const auto& codeword = index.code_.codewordFor(values[i]);
        for (int j = 0; j < codeword.length; j++) {
          deriveEquation(fingerprints[i], static_cast<uint32_t>(j), cseed,
                         vars, num_hashes, equation_vars);
          system.addEquation(equation_vars, codeword.bit(j));
        }
      }
      SolveOutcome outcome = solveSystem(system);
      if (outcome.solved) {
        const uint64_t offset = index.chunk_offsets_[c];
        for (uint32_t v = 0; v < vars; v++) {
          index.solution_.set(offset + v, outcome.solution.get(v));
        }
        index.chunk_attempts_[c] = static_cast<uint8_t>(attempt);
        solved = true;
      }
    }
    if (!solved) {
      throw UnsolvableSystemError(
          "CSF chunk " + std::to_string(c) + " was unsolvable after " +
          std::to_string(kMaxChunkAttempts) + " attempts");
    }
  }
  return index;
}

std::optional<uint64_t> CsfIndex::queryHashed(const Key128& fingerprint) const {
  const uint32_t num_chunks = numChunks();
  const uint32_t c = chunkOf(fingerprint, num_chunks);
  const uint32_t vars = chunk_num_vars_[c];
  if (vars == 0) {
    return std::nullopt;  // empty chunk: key cannot be a member
  }
  const uint64_t offset = chunk_offsets_[c];
  const uint64_t cseed = chunkSeed(build_seed_, c, chunk_attempts_[c]);

  uint32_t equation_vars[4];
  uint32_t bit_index = 0;
  try {
    const uint64_t value = code_.decodeOne([&]() {
      deriveEquation(fingerprint, bit_index, cseed, vars, num_hashes_,
                     equation_vars);
      bit_index++;
      bool bit = false;
      for (int i = 0; i < num_hashes_; i++) {
        bit ^= solution_.get(offset + equation_vars[i]);
      }
      return bit;
    });
    return value;
  } catch (const CorruptPayloadError&) {
    // Only reachable for keys outside the build set (incomplete code).
    return std::nullopt;
  }
}

CsfSizeReport CsfIndex::sizeReport() const {
  ByteWriter writer;
  serialize(writer);

  CsfSizeReport report;
  report.total_bits = writer.size() * 8;
  report.array_bits = chunk_offsets_.back();
  report.dictionary_bits =
      static_cast<uint64_t>(code_.numSymbols()) * 8 * value_bytes_;
  report.length_bits = static_cast<uint64_t>(code_.numSymbols()) *
                       bitsForCount(code_.maxLength());
  report.metadata_bits = report.total_bits - report.array_bits -
                         report.dictionary_bits - report.length_bits;
  report.bits_per_key = static_cast<double>(report.total_bits) /
                        static_cast<double>(num_keys_);
  report.avg_code_length = static_cast<double>(total_equations_) /
                           static_cast<double>(num_keys_);
  return report;
}

void CsfIndex::serialize(ByteWriter& out) const {
  out.writeU32(kCsfMagic);
  out.writeU8(kCsfVersion);
  out.writeU8(static_cast<uint8_t>(num_hashes_));
  out.writeU8(value_bytes_);
  out.writeU8(code_.maxLength());
  out.writeU64(num_keys_);
  out.writeU64(total_equations_);
  out.writeU64(build_seed_);
  out.writeU32(code_.numSymbols());
  out.writeU32(numChunks());
  out.writeU32(chunk_vars_base_);

  BitWriter bits;
  const int value_width = 8 * value_bytes_;
  for (uint64_t symbol : code_.symbols()) {
    bits.writeBits(symbol, value_width);
  }
  const int length_width = bitsForCount(code_.maxLength());
  for (uint8_t length : code_.lengths()) {
    bits.writeBits(static_cast<uint64_t>(length - 1), length_width);
  }
  for (uint32_t c = 0; c < numChunks(); c++) {
    const int64_t delta = static_cast<int64_t>(chunk_num_vars_[c]) -
                          static_cast<int64_t>(chunk_vars_base_);
    bits.writeRice(zigzagEncode(delta), kChunkDeltaRiceK);
    bits.writeUnary(chunk_attempts_[c]);
  }
  bits.appendBitArray(solution_);
  bits.flushTo(out);
}

CsfIndex CsfIndex::deserialize(ByteReader& in) {
  if (in.readU32() != kCsfMagic) {
    throw CorruptPayloadError("bad CSF magic");
  }
  if (in.readU8() != kCsfVersion) {
    throw CorruptPayloadError("unsupported CSF version");
  }

  CsfIndex index;
  const int num_hashes = in.readU8();
  if (num_hashes != 3 && num_hashes != 4) {
    throw CorruptPayloadError("CSF hash count must be 3 or 4");
  }
  index.num_hashes_ = num_hashes;
  index.value_bytes_ = in.readU8();
  if (index.value_bytes_ < 1 || index.value_bytes_ > 8) {
    throw CorruptPayloadError("CSF value width out of range");
  }
  const uint8_t max_length = in.readU8();
  if (max_length < 1 || max_length > kMaxCodeLength) {
    throw CorruptPayloadError("CSF code length out of range");
  }
  index.num_keys_ = in.readU64();
  index.total_equations_ = in.readU64();
  index.build_seed_ = in.readU64();
  const uint32_t num_symbols = in.readU32();
  if (num_symbols == 0 || num_symbols > index.num_keys_) {
    throw CorruptPayloadError("CSF symbol count out of range");
  }
  const uint32_t num_chunks = in.readU32();
  if (num_chunks == 0) {
    throw CorruptPayloadError("CSF chunk count must be positive");
  }
  index.chunk_vars_base_ = in.readU32();

  std::vector<uint8_t> payload(in.remaining());
  in.readBytes(payload.data(), payload.size());
  BitReader bits(payload.data(), payload.size());

  const int value_width = 8 * index.value_bytes_;
  std::vector<uint64_t> symbols(num_symbols);
  for (uint32_t i = 0; i < num_symbols; i++) {
    symbols[i] = bits.readBits(value_width);
  }
  const int length_width = bitsForCount(max_length);
  std::vector<uint8_t> lengths(num_symbols);
  for (uint32_t i = 0; i < num_symbols; i++) {
    lengths[i] = static_cast<uint8_t>(bits.readBits(length_width) + 1);
  }
  index.code_ = CanonicalCode::fromCanonical(std::move(symbols),
                                             std::move(lengths));
  if (index.code_.maxLength() != max_length) {
    throw CorruptPayloadError("CSF code length table is inconsistent");
  }

  index.chunk_num_vars_.resize(num_chunks);
  index.chunk_attempts_.resize(num_chunks);
  index.chunk_offsets_.assign(num_chunks + 1, 0);
  const uint32_t min_vars = static_cast<uint32_t>(num_hashes);
  for (uint32_t c = 0; c < num_chunks; c++) {
    const int64_t delta =
        zigzagDecode(bits.readRice(kChunkDeltaRiceK));
    const int64_t vars = static_cast<int64_t>(index.chunk_vars_base_) + delta;
    if (vars < 0 || (vars > 0 && vars < static_cast<int64_t>(min_vars)) ||
        vars > static_cast<int64_t>(1) << 32) {
      throw CorruptPayloadError("CSF chunk size out of range");
    }
    const uint64_t attempts = bits.readUnary();
    if (attempts >= kMaxChunkAttempts) {
      throw CorruptPayloadError("CSF chunk attempt count out of range");
    }
    index.chunk_num_vars_[c] = static_cast<uint32_t>(vars);
    index.chunk_attempts_[c] = static_cast<uint8_t>(attempts);
    index.chunk_offsets_[c + 1] = index.chunk_offsets_[c] + vars;
  }

  const uint64_t total_bits = index.chunk_offsets_[num_chunks];
  index.solution_ = BitArray(total_bits);
  for (uint64_t i = 0; i < total_bits; i++) {
    index.solution_.set(i, bits.readBit());
  }
  if (payload.size() * 8 - bits.position() >= 8) {
    throw CorruptPayloadError("CSF payload has trailing bytes");
  }
  return index;
}

}  // namespace autocsf
