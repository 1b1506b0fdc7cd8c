#include <autocsf/dataset.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include <autocsf/errors.h>

namespace autocsf {

namespace {

constexpr uint64_t kKeyMaterialSalt = 0x6b65796d61740001ULL;
constexpr uint64_t kProbeMaterialSalt = 0x70726f62656d0001ULL;
constexpr uint64_t kShuffleSalt = 0x73687566666c0001ULL;
constexpr uint64_t kValueDrawSalt = 0x76616c7565640001ULL;

// Probe keys embed indices past this offset; generated datasets embed
// indices below their size, so the two ranges can never collide.
constexpr uint64_t kProbeIndexOffset = 1ULL << 48;

// Zipf ranks are drawn from a fixed large universe.
constexpr uint64_t kZipfUniverse = 1000000;

std::string makeKeyBytes(uint64_t material, uint64_t index) {
  std::string key(16, '\0');
  for (int b = 0; b < 8; b++) {
    key[b] = static_cast<char>((material >> (8 * b)) & 0xFF);
    key[8 + b] = static_cast<char>((index >> (8 * b)) & 0xFF);
  }
  return key;
}

// Cumulative Zipf(s) mass over ranks 1..kZipfUniverse, cached per
// exponent: the table costs ~1e6 pow() calls to build and sweeps reuse
// the same exponent thousands of times.
std::shared_ptr<const std::vector<double>> zipfCumulative(double s) {
  static std::mutex cache_mutex;
  static std::unordered_map<uint64_t, std::shared_ptr<const std::vector<double>>>
      cache;

  uint64_t bits;
  static_assert(sizeof(bits) == sizeof(s));
  std::memcpy(&bits, &s, sizeof(bits));

  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(bits);
  if (it != cache.end()) {
    return it->second;
  }

  auto table = std::make_shared<std::vector<double>>(kZipfUniverse);
  double total = 0.0;
  for (uint64_t rank = 1; rank <= kZipfUniverse; rank++) {
    total += std::pow(static_cast<double>(rank), -s);
    (*table)[rank - 1] = total;
  }
  for (double& mass : *table) {
    mass /= total;
  }
  cache.emplace(bits, table);
  return table;
}

uint64_t drawZipfRank(const std::vector<double>& cumulative, SplitMix64& rng) {
  double u = rng.nextDouble();
  auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) {
    return cumulative.size();
  }
  return static_cast<uint64_t>(it - cumulative.begin()) + 1;
}

int decodeBase(char c) {
  switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: return -1;
  }
}

}  // namespace

double ValueHistogram::entropy() const {
  if (num_keys == 0) {
    return 0.0;
  }
  double h = 0.0;
  const double n = static_cast<double>(num_keys);
  for (const Entry& e : entries) {
    const double p = static_cast<double>(e.frequency) / n;
    h -= p * std::log2(p);
  }
  return h;
}

uint64_t ValueHistogram::maxValue() const {
  uint64_t max_value = 0;
  for (const Entry& e : entries) {
    max_value = std::max(max_value, e.value);
  }
  return max_value;
}

ValueHistogram computeHistogram(const std::vector<uint64_t>& values) {
  std::unordered_map<uint64_t, uint64_t> counts;
  counts.reserve(values.size());
  for (uint64_t v : values) {
    counts[v]++;
  }

  ValueHistogram histogram;
  histogram.num_keys = values.size();
  histogram.entries.reserve(counts.size());
  for (const auto& [value, frequency] : counts) {
    histogram.entries.push_back({value, frequency});
  }
  std::sort(histogram.entries.begin(), histogram.entries.end(),
            [](const ValueHistogram::Entry& a, const ValueHistogram::Entry& b) {
              if (a.frequency != b.frequency) {
                return a.frequency > b.frequency;
              }
              return a.value < b.value;
            });
  return histogram;
}

KeyValueDataset genSynthetic(uint64_t num_keys, double alpha,
                             const MinoritySpec& minority, uint64_t seed) {
  if (num_keys == 0) {
    throw InvalidArgumentError("genSynthetic: num_keys must be positive");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgumentError("genSynthetic: alpha must be in [0, 1]");
  }
  if (minority.law == MinorityLaw::kZipf && !(minority.zipf_s > 0.0)) {
    throw InvalidArgumentError("genSynthetic: Zipf exponent must be positive");
  }
  if (minority.law == MinorityLaw::kUniform && minority.uniform_m == 0) {
    throw InvalidArgumentError(
        "genSynthetic: uniform minority needs at least one value");
  }

  // Nudge before flooring so that unrepresentable alphas (0.29 * 100)
  // still land on the mathematically intended count.
  const double scaled = alpha * static_cast<double>(num_keys);
  uint64_t num_majority = static_cast<uint64_t>(std::floor(scaled + 1e-9));
  num_majority = std::min(num_majority, num_keys);
  const uint64_t num_minority = num_keys - num_majority;

  std::vector<uint64_t> values(num_keys, 0);
  SplitMix64 draw_rng(mixWithSeed(seed, kValueDrawSalt));
  std::shared_ptr<const std::vector<double>> zipf_table;
  if (minority.law == MinorityLaw::kZipf) {
    zipf_table = zipfCumulative(minority.zipf_s);
  }
  for (uint64_t i = 0; i < num_minority; i++) {
    uint64_t value = 0;
    switch (minority.law) {
      case MinorityLaw::kUnique:
        value = i + 1;
        break;
      case MinorityLaw::kZipf:
        value = drawZipfRank(*zipf_table, draw_rng);
        break;
      case MinorityLaw::kUniform:
        value = 1 + draw_rng.nextBounded(minority.uniform_m);
        break;
    }
    values[num_majority + i] = value;
  }

  // Seeded permutation of value assignments across keys.
  SplitMix64 shuffle_rng(mixWithSeed(seed, kShuffleSalt));
  for (uint64_t i = num_keys - 1; i > 0; i--) {
    uint64_t j = shuffle_rng.nextBounded(i + 1);
    std::swap(values[i], values[j]);
  }

  KeyValueDataset dataset;
  dataset.keys.reserve(num_keys);
  dataset.values = std::move(values);
  const uint64_t material_seed = mixWithSeed(seed, kKeyMaterialSalt);
  for (uint64_t i = 0; i < num_keys; i++) {
    dataset.keys.push_back(makeKeyBytes(mixWithSeed(material_seed, i), i));
  }
  return dataset;
}

std::vector<std::string> genProbeKeys(uint64_t count, uint64_t seed) {
  std::vector<std::string> keys;
  keys.reserve(count);
  const uint64_t material_seed = mixWithSeed(seed, kProbeMaterialSalt);
  for (uint64_t i = 0; i < count; i++) {
    keys.push_back(
        makeKeyBytes(mixWithSeed(material_seed, i), kProbeIndexOffset + i));
  }
  return keys;
}

uint64_t packKmer(const std::string& kmer) {
  if (kmer.empty() || kmer.size() > 32) {
    throw InvalidArgumentError("packKmer: k must be in [1, 32]");
  }
  uint64_t packed = 0;
  for (char c : kmer) {
    int code = decodeBase(c);
    if (code < 0) {
      throw ParseError(std::string("packKmer: invalid base '") + c +
                       "' (expected A, C, G or T)");
    }
    packed = (packed << 2) | static_cast<uint64_t>(code);
  }
  return packed;
}

std::string kmerKeyBytes(uint64_t packed, int k) {
  if (k < 1 || k > 32) {
    throw InvalidArgumentError("kmerKeyBytes: k must be in [1, 32]");
  }
  const int num_bytes = (2 * k + 7) / 8;
  std::string bytes(static_cast<size_t>(num_bytes), '\0');
  for (int j = 0; j < num_bytes; j++) {
    bytes[j] =
        static_cast<char>((packed >> (8 * (num_bytes - 1 - j))) & 0xFF);
  }
  return bytes;
}

KeyValueDataset loadKmerTable(const std::string& path, int k) {
  if (k < 1 || k > 32) {
    throw InvalidArgumentError("loadKmerTable: k must be in [1, 32]");
  }
  std::ifstream in(path);
  if (!in) {
    throw ParseError("loadKmerTable: cannot open " + path);
  }

  KeyValueDataset dataset;
  std::unordered_set<uint64_t> seen;
  std::string line;
  uint64_t line_number = 0;
  while (std::getline(in, line)) {
    line_number++;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("loadKmerTable: line " + std::to_string(line_number) +
                       ": expected KMER<TAB>COUNT");
    }
    const std::string kmer = line.substr(0, tab);
    if (static_cast<int>(kmer.size()) != k) {
      throw ParseError("loadKmerTable: line " + std::to_string(line_number) +
                       ": k-mer length " + std::to_string(kmer.size()) +
                       " does not match k=" + std::to_string(k));
    }
    uint64_t packed;
    try {
      packed = packKmer(kmer);
    } catch (const ParseError& e) {
      throw ParseError("loadKmerTable: line " + std::to_string(line_number) +
                       ": " + e.what());
    }
    if (!seen.insert(packed).second) {
      throw ParseError("loadKmerTable: line " + std::to_string(line_number) +
                       ": duplicate k-mer " + kmer);
    }

    const std::string count_text = line.substr(tab + 1);
    if (count_text.empty() ||
        count_text.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("loadKmerTable: line " + std::to_string(line_number) +
                       ": count must be a positive integer");
    }
    uint64_t count;
    try {
      count = std::stoull(count_text);
    } catch (const std::exception&) {
      throw ParseError("loadKmerTable: line " + std::to_string(line_number) +
                       ": count is out of range");
    }
    if (count == 0) {
      throw ParseError("loadKmerTable: line " + std::to_string(line_number) +
                       ": count must be positive");
    }

    dataset.keys.push_back(kmerKeyBytes(packed, k));
    dataset.values.push_back(count);
  }
  if (dataset.keys.empty()) {
    throw ParseError("loadKmerTable: " + path + " contains no records");
  }
  return dataset;
}

}  // namespace autocsf
