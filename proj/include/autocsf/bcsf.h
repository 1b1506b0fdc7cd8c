#pragma once

#include <cstdint>
#include <vector>

#include <autocsf/auto_csf.h>
#include <autocsf/dataset.h>

namespace autocsf {

// Analytic CSF cost (bits/key) as a function of value entropy h0, used by
// the BCSF heuristic: quadratic below 2 bits, affine above.
double bcsfCsfCost(double h0);

// The entropy-based filtered-CSF heuristic: pick a continuous Bloom
// operating point from alpha and h0 alone, with no spec grid and no
// guarantee the filter helps.
struct BcsfDecision {
  double alpha = 0;
  double h0 = 0;
  double c_bf = 1.44;     // Bloom space coefficient (bits/key/ln(1/eps))
  double c_csf = 0;       // bcsfCsfCost(h0)
  double eps_star = 0;    // unconstrained optimum of the cost model
  double alpha_threshold = 0;
  bool use_filter = false;

  // Realized Bloom parameters when use_filter (bits_per_entry kept real).
  double bits_per_entry = 0;
  int hash_count = 0;
};

BcsfDecision bcsfDecide(const ValueHistogram& histogram);

struct BcsfBuildResult {
  AutoIndex index;
  BcsfDecision decision;
};

BcsfBuildResult buildBcsf(const KeyValueDataset& dataset, int num_hashes,
                          uint64_t seed);
BcsfBuildResult buildBcsfHashed(const std::vector<Key128>& fingerprints,
                                const std::vector<uint64_t>& values,
                                int num_hashes, uint64_t seed);

}  // namespace autocsf
