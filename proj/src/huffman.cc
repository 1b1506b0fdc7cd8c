#include <autocsf/huffman.h>

#include <algorithm>
#include <numeric>
#include <queue>

namespace autocsf {

namespace {

// Depths of an optimal prefix tree over `weights` (histogram-rank order).
// Equal-weight ties pop lower serial numbers first; leaves carry serials
// 0..n-1 (their rank) and internal nodes n, n+1, ..., so ties prefer
// lower ranks and resolve leaf-vs-internal consistently.
std::vector<uint8_t> huffmanDepths(const std::vector<uint64_t>& weights) {
  const size_t n = weights.size();
  if (n == 1) {
    return {1};
  }

  using HeapItem = std::pair<uint64_t, uint64_t>;  // (weight, serial == id)
  std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;
  std::vector<uint32_t> parent(2 * n - 1, 0);
  std::vector<uint64_t> node_weight(2 * n - 1, 0);

  for (size_t i = 0; i < n; i++) {
    node_weight[i] = weights[i];
    heap.push({weights[i], i});
  }
  uint64_t next_id = n;
  while (heap.size() > 1) {
    const auto [wa, a] = heap.top();
    heap.pop();
    const auto [wb, b] = heap.top();
    heap.pop();
    parent[a] = static_cast<uint32_t>(next_id);
    parent[b] = static_cast<uint32_t>(next_id);
    node_weight[next_id] = wa + wb;
    heap.push({wa + wb, next_id});
    next_id++;
  }

  // Parents always have larger ids than their children, so one backwards
  // sweep resolves all depths from the root.
  std::vector<uint8_t> depth(2 * n - 1, 0);
  for (size_t i = 2 * n - 2; i-- > 0;) {
    depth[i] = static_cast<uint8_t>(depth[parent[i]] + 1);
  }
  depth.resize(n);
  return depth;
}

}  // namespace

CanonicalCode CanonicalCode::fromHistogram(const ValueHistogram& histogram) {
  const size_t n = histogram.entries.size();
  if (n == 0) {
    throw InvalidArgumentError("CanonicalCode: histogram is empty");
  }

  std::vector<uint64_t> weights(n);
  for (size_t i = 0; i < n; i++) {
    if (histogram.entries[i].frequency == 0) {
      throw InvalidArgumentError("CanonicalCode: zero-frequency entry");
    }
    weights[i] = histogram.entries[i].frequency;
  }

  // Flatten the distribution until the tree respects the length limit.
  // Halving weights shrinks the worst-case depth by roughly one level per
  // round and always terminates at the uniform distribution.
  std::vector<uint8_t> depths = huffmanDepths(weights);
  while (*std::max_element(depths.begin(), depths.end()) > kMaxCodeLength) {
    for (uint64_t& w : weights) {
      w = (w + 1) / 2;
    }
    depths = huffmanDepths(weights);
  }

  // Canonical order: (length ascending, rank ascending).
  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    if (depths[a] != depths[b]) {
      return depths[a] < depths[b];
    }
    return a < b;
  });

  CanonicalCode code;
  code.symbols_.reserve(n);
  code.lengths_.reserve(n);
  for (uint32_t rank : order) {
    code.symbols_.push_back(histogram.entries[rank].value);
    code.lengths_.push_back(depths[rank]);
  }
  code.finalize();
  return code;
}

CanonicalCode CanonicalCode::fromCanonical(std::vector<uint64_t> values,
                                           std::vector<uint8_t> lengths) {
  if (values.empty() || values.size() != lengths.size()) {
    throw CorruptPayloadError("canonical code tables are malformed");
  }
  CanonicalCode code;
  code.symbols_ = std::move(values);
  code.lengths_ = std::move(lengths);
  code.finalize();
  return code;
}

void CanonicalCode::finalize() {
  const size_t n = symbols_.size();
  max_length_ = lengths_.back();
  if (max_length_ == 0 || max_length_ > kMaxCodeLength) {
    throw CorruptPayloadError("prefix-code length out of range");
  }

  // Kraft check: single-value codes use the convention {length 1,
  // codeword "0"}; larger codes must be complete.
  uint64_t kraft = 0;  // scaled by 2^max_length_
  for (size_t i = 0; i < n; i++) {
    if (lengths_[i] == 0 || lengths_[i] > max_length_ ||
        (i > 0 && lengths_[i] < lengths_[i - 1])) {
      throw CorruptPayloadError("prefix-code lengths are not canonical");
    }
    kraft += 1ULL << (max_length_ - lengths_[i]);
  }
  const uint64_t full = 1ULL << max_length_;
  if (n == 1) {
    if (lengths_[0] != 1) {
      throw CorruptPayloadError("single-value code must have length 1");
    }
  } else if (kraft != full) {
    throw CorruptPayloadError("prefix-code lengths violate Kraft equality");
  }

  codewords_.resize(n);
  encode_index_.clear();
  encode_index_.reserve(n);
  std::fill(std::begin(first_code_), std::end(first_code_), ~0ULL);
  std::fill(std::begin(count_), std::end(count_), 0);
  std::fill(std::begin(first_index_), std::end(first_index_), 0);

  uint64_t next = 0;
  uint8_t prev_length = lengths_[0];
  for (size_t i = 0; i < n; i++) {
    next <<= (lengths_[i] - prev_length);
    prev_length = lengths_[i];
    codewords_[i] = {lengths_[i], next};
    if (count_[lengths_[i]] == 0) {
      first_code_[lengths_[i]] = next;
      first_index_[lengths_[i]] = static_cast<uint32_t>(i);
    }
    count_[lengths_[i]]++;
    if (!encode_index_.emplace(symbols_[i], static_cast<uint32_t>(i)).second) {
      throw CorruptPayloadError("duplicate value in prefix code");
    }
    next++;
  }
}

const CanonicalCode::Codeword& CanonicalCode::codewordFor(
    uint64_t value) const {
  auto it = encode_index_.find(value);
  if (it == encode_index_.end()) {
    throw InvalidArgumentError("value is not present in the prefix code");
  }
  return codewords_[it->second];
}

double avgCodeLength(const CanonicalCode& code,
                     const ValueHistogram& histogram) {
  if (histogram.num_keys == 0) {
    return 0.0;
  }
  return static_cast<double>(totalCodeBits(code, histogram)) /
         static_cast<double>(histogram.num_keys);
}

uint64_t totalCodeBits(const CanonicalCode& code,
                       const ValueHistogram& histogram) {
  uint64_t total = 0;
  for (const auto& entry : histogram.entries) {
    total += entry.frequency * code.lengthFor(entry.value);
  }
  return total;
}

}  // namespace autocsf
