#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <autocsf/auto_csf.h>
#include <autocsf/bcsf.h>
#include <autocsf/csf.h>
#include <autocsf/dataset.h>
#include <autocsf/filters.h>

using namespace autocsf;

namespace {

ValueHistogram histogramOf(const std::vector<uint64_t>& values) {
  return computeHistogram(values);
}

}  // namespace

TEST_CASE("bcsf csf-cost model spot values") {
  CHECK(bcsfCsfCost(0.0) == doctest::Approx(1.16));
  CHECK(bcsfCsfCost(1.0) == doctest::Approx(1.56));
  CHECK(bcsfCsfCost(3.0) == doctest::Approx(3.5));
  // The quadratic and affine branches meet exactly at h0 = 2.
  CHECK(bcsfCsfCost(2.0) == doctest::Approx(2.4));
  CHECK(bcsfCsfCost(1.999999) == doctest::Approx(2.4).epsilon(1e-5));
  CHECK(bcsfCsfCost(10.0) == doctest::Approx(11.2));
}

TEST_CASE("bcsf decision formulas at alpha 0.9, h0 ~ 1") {
  // 360 majority keys plus 40 singleton minority values: alpha = 0.9 and
  // H0 = 0.9*log2(1/0.9) + 0.1*log2(400) = 1.0012.
  std::vector<uint64_t> values(360, 5);
  for (uint64_t v = 100; v < 140; v++) {
    values.push_back(v);
  }
  ValueHistogram h = histogramOf(values);
  REQUIRE(h.dominantFraction() == doctest::Approx(0.9));
  REQUIRE(h.entropy() == doctest::Approx(1.0012).epsilon(1e-4));

  BcsfDecision d = bcsfDecide(h);
  CHECK(d.alpha == doctest::Approx(0.9));
  CHECK(d.h0 == doctest::Approx(h.entropy()));
  CHECK(d.c_bf == doctest::Approx(1.44));
  CHECK(d.c_csf == doctest::Approx(bcsfCsfCost(h.entropy())));

  // eps* = (c_bf/c_csf) * ((1-alpha)/alpha) * log2(e).
  const double expected_eps =
      (d.c_bf / d.c_csf) * ((1.0 - d.alpha) / d.alpha) * std::numbers::log2e;
  CHECK(d.eps_star == doctest::Approx(expected_eps).epsilon(1e-12));
  CHECK(d.eps_star == doctest::Approx(0.1479).epsilon(2e-3));

  // threshold = c_bf*log2(e) / (c_csf + c_bf*log2(e)) ~ 2.0775/3.6375.
  const double expected_threshold =
      d.c_bf * std::numbers::log2e /
      (d.c_csf + d.c_bf * std::numbers::log2e);
  CHECK(d.alpha_threshold ==
        doctest::Approx(expected_threshold).epsilon(1e-12));
  CHECK(d.alpha_threshold == doctest::Approx(0.571).epsilon(2e-3));
  CHECK(d.use_filter);

  // Realized Bloom parameters follow the idealized sizing rule.
  const double expected_bpe = 1.44 * std::log2(1.0 / d.eps_star);
  CHECK(d.bits_per_entry == doctest::Approx(expected_bpe).epsilon(1e-9));
  CHECK(d.hash_count ==
        static_cast<int>(std::llround(expected_bpe * std::numbers::ln2)));
}

TEST_CASE("bcsf decision in the alpha to one limit") {
  std::vector<uint64_t> values(1000, 3);
  BcsfDecision d = bcsfDecide(histogramOf(values));
  CHECK(d.alpha == doctest::Approx(1.0));
  CHECK(d.eps_star == doctest::Approx(0.0));
  CHECK(d.use_filter);
}

TEST_CASE("bcsf declines to filter without a dominant value") {
  // 10 equally common values: alpha = 0.1 sits far below the threshold.
  std::vector<uint64_t> values;
  for (uint64_t v = 0; v < 10; v++) {
    for (int i = 0; i < 100; i++) {
      values.push_back(v);
    }
  }
  BcsfDecision d = bcsfDecide(histogramOf(values));
  CHECK(d.alpha == doctest::Approx(0.1));
  CHECK_FALSE(d.use_filter);
}

TEST_CASE("bcsf failure mode: filters the unique distribution at alpha 0.5") {
  KeyValueDataset ds = genSynthetic(100000, 0.5, MinoritySpec::Unique(), 13);
  ValueHistogram h = computeHistogram(ds);

  BcsfDecision d = bcsfDecide(h);
  // h0 = 0.5 + 0.5*log2(1e5) = 8.805; c_csf = 1.1*h0 + 0.2.
  CHECK(d.h0 == doctest::Approx(8.805).epsilon(1e-3));
  CHECK(d.c_csf == doctest::Approx(1.1 * d.h0 + 0.2).epsilon(1e-9));
  CHECK(d.eps_star == doctest::Approx(0.2102).epsilon(2e-3));
  CHECK(d.alpha_threshold == doctest::Approx(0.1737).epsilon(2e-3));
  // The heuristic filters here even though filtering wastes space.
  CHECK(d.use_filter);

  BcsfBuildResult bcsf = buildBcsf(ds, 3, 17);
  CHECK(bcsf.index.isFiltered());
  AutoIndex plain = buildPlainIndex(ds, 3, 17);
  const double excess = bcsf.index.bitsPerKey() - plain.bitsPerKey();
  CHECK(excess >= 0.3);
  CHECK(excess <= 1.5);

  // AutoCSF refuses the filter on the same data and matches plain exactly.
  AutoBuildResult auto_result = buildAuto(ds, 3, enumerateAllSpecs(), 17);
  CHECK_FALSE(auto_result.index.isFiltered());
  CHECK(auto_result.index.sizeBits() == plain.sizeBits());
}

TEST_CASE("bcsf stays exact even when its parameters are poor") {
  struct Case {
    double alpha;
    MinoritySpec law;
  };
  const Case cases[] = {
      {0.5, MinoritySpec::Unique()},
      {0.9, MinoritySpec::Uniform(100)},
      {0.95, MinoritySpec::Zipf(1.5)},
      {0.2, MinoritySpec::Uniform(100)},
  };
  for (const auto& c : cases) {
    KeyValueDataset ds = genSynthetic(20000, c.alpha, c.law, 19);
    BcsfBuildResult result = buildBcsf(ds, 3, 23);
    for (size_t i = 0; i < ds.size(); i++) {
      auto got = result.index.query(ds.keys[i]);
      REQUIRE(got.has_value());
      REQUIRE(*got == ds.values[i]);
    }
  }
}

TEST_CASE("bcsf is competitive when skew is real") {
  KeyValueDataset ds = genSynthetic(100000, 0.95, MinoritySpec::Uniform(100), 29);
  BcsfBuildResult bcsf = buildBcsf(ds, 3, 31);
  AutoBuildResult auto_result = buildAuto(ds, 3, enumerateAllSpecs(), 31);
  CHECK(bcsf.index.isFiltered());
  CHECK(auto_result.index.isFiltered());
  CHECK(bcsf.index.bitsPerKey() <=
        auto_result.index.bitsPerKey() * 1.15);
}

TEST_CASE("bcsf decide is a pure function of the histogram") {
  KeyValueDataset ds = genSynthetic(5000, 0.8, MinoritySpec::Zipf(1.5), 37);
  ValueHistogram h = computeHistogram(ds);
  BcsfDecision a = bcsfDecide(h);
  BcsfDecision b = bcsfDecide(h);
  CHECK(a.eps_star == b.eps_star);
  CHECK(a.alpha_threshold == b.alpha_threshold);
  CHECK(a.use_filter == b.use_filter);
  CHECK(a.bits_per_entry == b.bits_per_entry);
  CHECK(a.hash_count == b.hash_count);
}
