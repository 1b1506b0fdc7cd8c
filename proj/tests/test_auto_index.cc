#include <doctest.h>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <autocsf/auto_csf.h>
#include <autocsf/csf.h>
#include <autocsf/dataset.h>
#include <autocsf/errors.h>
#include <autocsf/filters.h>

using namespace autocsf;

TEST_CASE("auto index is exact for every built key across variants") {
  struct Case {
    double alpha;
    MinoritySpec law;
  };
  const Case cases[] = {
      {0.95, MinoritySpec::Uniform(100)},  // filtered
      {0.5, MinoritySpec::Unique()},       // plain
      {0.9, MinoritySpec::Zipf(1.5)},      // filtered
      {0.0, MinoritySpec::Uniform(100)},   // plain, no majority
  };
  for (const auto& c : cases) {
    KeyValueDataset ds = genSynthetic(20000, c.alpha, c.law, 5);
    AutoBuildResult result = buildAuto(ds, 3, enumerateAllSpecs(), 9);
    CHECK(result.index.numKeys() == ds.size());
    CHECK(result.index.isFiltered() == result.report.use_filter);
    for (size_t i = 0; i < ds.size(); i++) {
      auto got = result.index.query(ds.keys[i]);
      REQUIRE(got.has_value());
      REQUIRE(*got == ds.values[i]);
    }
  }
}

TEST_CASE("auto decision matches expectations on canonical datasets") {
  {
    KeyValueDataset ds = genSynthetic(100000, 0.5, MinoritySpec::Unique(), 3);
    AutoBuildResult result = buildAuto(ds, 3, enumerateAllSpecs(), 1);
    CHECK_FALSE(result.report.use_filter);
    CHECK_FALSE(result.index.isFiltered());
  }
  {
    KeyValueDataset ds =
        genSynthetic(100000, 0.95, MinoritySpec::Uniform(100), 3);
    AutoBuildResult result = buildAuto(ds, 3, enumerateAllSpecs(), 1);
    CHECK(result.report.use_filter);
    CHECK(result.index.isFiltered());
    CHECK(result.index.bitsPerKey() <
          buildPlainIndex(ds, 3, 1).bitsPerKey());
  }
}

TEST_CASE("filtered index holds exactly minority plus passthrough keys") {
  KeyValueDataset ds = genSynthetic(50000, 0.9, MinoritySpec::Uniform(100), 7);
  AutoBuildResult result = buildAuto(ds, 3, enumerateAllSpecs(), 13);
  REQUIRE(result.index.isFiltered());
  REQUIRE(result.index.csf() != nullptr);

  uint64_t minority = 0;
  uint64_t majority_accepted = 0;
  const MembershipFilter* filter = result.index.filter();
  for (size_t i = 0; i < ds.size(); i++) {
    if (ds.values[i] != result.index.majorityValue()) {
      minority++;
      // No false negatives on inserted minority keys.
      REQUIRE(filter->contains(ds.keys[i]));
    } else if (filter->contains(ds.keys[i])) {
      majority_accepted++;
    }
  }
  CHECK(filter->numEntries() == minority);
  CHECK(result.index.passthroughCount() == majority_accepted);
  CHECK(result.index.csf()->numKeys() == minority + majority_accepted);
}

TEST_CASE("query paths: filter negative, filter positive, minority") {
  KeyValueDataset ds = genSynthetic(50000, 0.9, MinoritySpec::Uniform(100), 21);
  AutoBuildResult result = buildAuto(ds, 3, enumerateAllSpecs(), 31);
  REQUIRE(result.index.isFiltered());
  const MembershipFilter* filter = result.index.filter();
  const uint64_t v0 = result.index.majorityValue();

  bool saw_rejected_majority = false;
  bool saw_accepted_majority = false;
  bool saw_minority = false;
  for (size_t i = 0; i < ds.size(); i++) {
    const bool in_filter = filter->contains(ds.keys[i]);
    auto got = result.index.query(ds.keys[i]);
    REQUIRE(got.has_value());
    if (ds.values[i] == v0) {
      CHECK(*got == v0);
      if (in_filter) {
        saw_accepted_majority = true;  // answered by the CSF
      } else {
        saw_rejected_majority = true;  // answered by the filter miss
      }
    } else {
      REQUIRE(in_filter);
      CHECK(*got == ds.values[i]);
      saw_minority = true;
    }
  }
  CHECK(saw_rejected_majority);
  CHECK(saw_accepted_majority);
  CHECK(saw_minority);
}

TEST_CASE("all-majority dataset stays exact with an empty minority set") {
  KeyValueDataset ds;
  for (int i = 0; i < 5000; i++) {
    ds.keys.push_back("mono-" + std::to_string(i));
    ds.values.push_back(77);
  }
  AutoBuildResult result = buildAuto(ds, 3, enumerateAllSpecs(), 3);
  CHECK(result.index.majorityValue() == 77);
  for (const auto& key : ds.keys) {
    auto got = result.index.query(key);
    REQUIRE(got.has_value());
    CHECK(*got == 77);
  }
  if (result.index.isFiltered()) {
    CHECK(result.index.filter()->numEntries() == 0);
    // With an empty filter nothing passes through to a CSF.
    CHECK(result.index.passthroughCount() == 0);
  }
  // Out-of-set keys get the majority value from the empty filter.
  if (result.index.isFiltered()) {
    auto got = result.index.query("never-inserted");
    REQUIRE(got.has_value());
    CHECK(*got == 77);
  }
}

TEST_CASE("passthrough fraction tracks the model eps") {
  // f0 = 90000 majority keys, xor f=4 (eps = 0.0625): the false-positive
  // count concentrates tightly around eps * f0.
  KeyValueDataset ds = genSynthetic(100000, 0.9, MinoritySpec::Uniform(100), 11);
  const uint64_t f0 = 90000;
  AutoIndex index = [&] {
    std::vector<Key128> fps;
    fps.reserve(ds.size());
    for (const auto& key : ds.keys) {
      fps.push_back(fingerprintKey(key));
    }
    return buildFilteredIndexHashed(fps, ds.values, 0, xorSpec(4), 3, 17);
  }();
  REQUIRE(index.isFiltered());
  const double ratio = static_cast<double>(index.passthroughCount()) /
                       static_cast<double>(f0);
  CHECK(ratio == doctest::Approx(0.0625).epsilon(0.15));
}

TEST_CASE("auto container serialization round-trips byte for byte") {
  for (double alpha : {0.5, 0.95}) {
    KeyValueDataset ds =
        genSynthetic(20000, alpha, MinoritySpec::Uniform(100), 19);
    AutoBuildResult result = buildAuto(ds, 3, enumerateAllSpecs(), 23);
    AutoIndex& index = result.index;
    index.setKeyMode(KeyMode::kPackedKmer, 15);

    ByteWriter writer;
    index.serialize(writer);
    ByteReader reader(writer.bytes());
    AutoIndex loaded = AutoIndex::deserialize(reader);

    CHECK(loaded.isFiltered() == index.isFiltered());
    CHECK(loaded.majorityValue() == index.majorityValue());
    CHECK(loaded.numKeys() == index.numKeys());
    CHECK(loaded.keyMode() == KeyMode::kPackedKmer);
    CHECK(loaded.kmerK() == 15);
    CHECK(loaded.sizeBits() == index.sizeBits());
    for (size_t i = 0; i < ds.size(); i += 7) {
      auto got = loaded.query(ds.keys[i]);
      REQUIRE(got.has_value());
      REQUIRE(*got == ds.values[i]);
    }

    ByteWriter rewritten;
    loaded.serialize(rewritten);
    CHECK(rewritten.bytes() == writer.bytes());
  }
}

TEST_CASE("auto container file save and load") {
  KeyValueDataset ds = genSynthetic(10000, 0.9, MinoritySpec::Zipf(1.5), 29);
  AutoBuildResult result = buildAuto(ds, 3, enumerateAllSpecs(), 37);
  const std::string path = "test_auto_index.csf.tmp";
  result.index.saveFile(path);

  AutoIndex loaded = AutoIndex::loadFile(path);
  CHECK(loaded.numKeys() == ds.size());
  for (size_t i = 0; i < ds.size(); i += 11) {
    auto got = loaded.query(ds.keys[i]);
    REQUIRE(got.has_value());
    REQUIRE(*got == ds.values[i]);
  }
  std::remove(path.c_str());

  CHECK_THROWS(AutoIndex::loadFile("does-not-exist.csf"));
}

TEST_CASE("auto container rejects corrupted payloads") {
  KeyValueDataset ds = genSynthetic(5000, 0.9, MinoritySpec::Uniform(100), 41);
  AutoBuildResult result = buildAuto(ds, 3, enumerateAllSpecs(), 43);
  ByteWriter writer;
  result.index.serialize(writer);
  std::vector<uint8_t> bytes = writer.bytes();

  for (size_t keep : {size_t{0}, size_t{2}, size_t{8}, bytes.size() / 3,
                      bytes.size() - 1}) {
    ByteReader reader(bytes.data(), keep);
    CHECK_THROWS_AS(AutoIndex::deserialize(reader), CorruptPayloadError);
  }

  std::vector<uint8_t> bad_magic = bytes;
  bad_magic[1] ^= 0x55;
  ByteReader reader(bad_magic.data(), bad_magic.size());
  CHECK_THROWS_AS(AutoIndex::deserialize(reader), CorruptPayloadError);
}

TEST_CASE("measured savings equals the two-build size difference") {
  KeyValueDataset ds = genSynthetic(20000, 0.9, MinoritySpec::Uniform(100), 47);
  const FilterSpec spec = binaryFuseSpec(4);
  const double savings = measuredSavings(ds, 3, spec, 53);

  std::vector<Key128> fps;
  for (const auto& key : ds.keys) {
    fps.push_back(fingerprintKey(key));
  }
  AutoIndex plain = buildPlainIndexHashed(fps, ds.values, 3, 53);
  ValueHistogram h = computeHistogram(ds);
  AutoIndex filtered = buildFilteredIndexHashed(
      fps, ds.values, h.entries[0].value, spec, 3, 53);
  const double expected =
      (static_cast<double>(plain.sizeBits()) -
       static_cast<double>(filtered.sizeBits())) /
      static_cast<double>(ds.size());
  CHECK(savings == doctest::Approx(expected).epsilon(1e-12));
  CHECK(savings > 0.0);
}

TEST_CASE("auto builds are deterministic per seed") {
  KeyValueDataset ds = genSynthetic(10000, 0.95, MinoritySpec::Uniform(100), 59);
  AutoBuildResult a = buildAuto(ds, 3, enumerateAllSpecs(), 61);
  AutoBuildResult b = buildAuto(ds, 3, enumerateAllSpecs(), 61);
  ByteWriter wa;
  ByteWriter wb;
  a.index.serialize(wa);
  b.index.serialize(wb);
  CHECK(wa.bytes() == wb.bytes());

  // A different seed still answers exactly.
  AutoBuildResult c = buildAuto(ds, 3, enumerateAllSpecs(), 62);
  for (size_t i = 0; i < ds.size(); i += 13) {
    auto got = c.index.query(ds.keys[i]);
    REQUIRE(got.has_value());
    REQUIRE(*got == ds.values[i]);
  }
}

TEST_CASE("plain wrapper matches the underlying csf") {
  KeyValueDataset ds = genSynthetic(5000, 0.5, MinoritySpec::Uniform(10), 67);
  AutoIndex plain = buildPlainIndex(ds, 3, 71);
  CHECK_FALSE(plain.isFiltered());
  CHECK(plain.filter() == nullptr);
  REQUIRE(plain.csf() != nullptr);
  CHECK(plain.csf()->numKeys() == ds.size());
  // Container adds only a fixed-size header over the raw CSF.
  const uint64_t csf_bits = [&] {
    ByteWriter w;
    plain.csf()->serialize(w);
    return w.size() * 8;
  }();
  CHECK(plain.sizeBits() >= csf_bits);
  CHECK(plain.sizeBits() <= csf_bits + 64 * 8);
}
