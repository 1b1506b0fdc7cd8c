#include <autocsf/bcsf.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <autocsf/errors.h>

namespace autocsf {

double bcsfCsfCost(double h0) {
  if (h0 < 2.0) {
    return 0.22 * h0 * h0 + 0.18 * h0 + 1.16;
  }
  return 1.1 * h0 + 0.2;
}

BcsfDecision bcsfDecide(const ValueHistogram& histogram) {
  BcsfDecision d;
  d.alpha = histogram.dominantFraction();
  d.h0 = histogram.entropy();
  d.c_csf = bcsfCsfCost(d.h0);

  const double log2e = std::numbers::log2e;
  d.alpha_threshold = d.c_bf * log2e / (d.c_csf + d.c_bf * log2e);
  if (d.alpha <= 0.0) {
    d.eps_star = std::numeric_limits<double>::infinity();
    d.use_filter = false;
    return d;
  }
  d.eps_star = (d.c_bf / d.c_csf) * ((1.0 - d.alpha) / d.alpha) * log2e;
  d.use_filter = d.eps_star < 1.0 && d.alpha > d.alpha_threshold;
  if (d.use_filter) {
    // Realize the continuous optimum as a Bloom filter; keep eps away
    // from 0 so the degenerate all-majority case stays finite.
    const double eps = std::max(d.eps_star, 1e-9);
    d.bits_per_entry = d.c_bf * std::log2(1.0 / eps);
    d.hash_count = std::max(
        1, static_cast<int>(std::llround(d.bits_per_entry * std::numbers::ln2)));
  }
  return d;
}

BcsfBuildResult buildBcsf(const KeyValueDataset& dataset, int num_hashes,
                          uint64_t seed) {
  std::vector<Key128> fingerprints;
  fingerprints.reserve(dataset.keys.size());
  for (const std::string& key : dataset.keys) {
    fingerprints.push_back(fingerprintKey(key));
  }
  return buildBcsfHashed(fingerprints, dataset.values, num_hashes, seed);
}

BcsfBuildResult buildBcsfHashed(const std::vector<Key128>& fingerprints,
                                const std::vector<uint64_t>& values,
                                int num_hashes, uint64_t seed) {
  if (values.empty()) {
    throw InvalidArgumentError("buildBcsfHashed: empty dataset");
  }
  const ValueHistogram histogram = computeHistogram(values);
  BcsfDecision decision = bcsfDecide(histogram);
  if (!decision.use_filter) {
    return BcsfBuildResult{
        buildPlainIndexHashed(fingerprints, values, num_hashes, seed),
        decision};
  }
  const FilterSpec spec =
      bloomSpec(decision.hash_count, decision.bits_per_entry);
  return BcsfBuildResult{
      buildFilteredIndexHashed(fingerprints, values,
                               histogram.entries[0].value, spec, num_hashes,
                               seed),
      decision};
}

}  // namespace autocsf
