// Command-line harness: synthetic sweeps, baseline benchmarks, and index
// build/query plumbing. Emits CSV (sweeps, bench) or JSON (build report).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <autocsf/auto_csf.h>
#include <autocsf/bcsf.h>
#include <autocsf/csf.h>
#include <autocsf/dataset.h>
#include <autocsf/errors.h>
#include <autocsf/filters.h>

namespace {

using namespace autocsf;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Shared helpers

struct DistChoice {
  std::string name;
  MinoritySpec spec;
};

std::vector<std::string> splitList(const std::string& text) {
  std::vector<std::string> parts;
  std::string item;
  std::stringstream stream(text);
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) {
      parts.push_back(item);
    }
  }
  return parts;
}

std::vector<DistChoice> parseDists(const std::string& text) {
  std::vector<DistChoice> dists;
  for (const std::string& name : splitList(text)) {
    if (name == "uniform100") {
      dists.push_back({name, MinoritySpec::Uniform(100)});
    } else if (name == "zipf") {
      dists.push_back({name, MinoritySpec::Zipf(1.5)});
    } else if (name == "unique") {
      dists.push_back({name, MinoritySpec::Unique()});
    } else {
      throw CLI::ValidationError(
          "--dist", "unknown distribution '" + name +
                        "' (expected uniform100, zipf, unique)");
    }
  }
  if (dists.empty()) {
    throw CLI::ValidationError("--dist", "no distributions selected");
  }
  return dists;
}

std::vector<double> parseAlphas(const std::string& text) {
  std::vector<double> alphas;
  for (const std::string& item : splitList(text)) {
    size_t used = 0;
    double a = std::stod(item, &used);
    if (used != item.size() || a < 0.0 || a > 1.0) {
      throw CLI::ValidationError("--alphas", "bad alpha '" + item + "'");
    }
    alphas.push_back(a);
  }
  if (alphas.empty()) {
    throw CLI::ValidationError("--alphas", "no alphas selected");
  }
  return alphas;
}

std::vector<FilterFamily> parseFamilies(const std::string& text) {
  std::vector<FilterFamily> families;
  for (const std::string& name : splitList(text)) {
    if (name == "bloom") {
      families.push_back(FilterFamily::kBloom);
    } else if (name == "xor") {
      families.push_back(FilterFamily::kXor);
    } else if (name == "binaryfuse") {
      families.push_back(FilterFamily::kBinaryFuse);
    } else {
      throw CLI::ValidationError("--families",
                                 "unknown family '" + name +
                                     "' (expected bloom, xor, binaryfuse)");
    }
  }
  if (families.empty()) {
    throw CLI::ValidationError("--families", "no families selected");
  }
  return families;
}

// Output sink: --out file or stdout.
class CsvOut {
 public:
  explicit CsvOut(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::trunc);
      if (!file_) {
        throw AutoCsfError("cannot open for writing: " + path);
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::string cpuModel() {
  std::ifstream info("/proc/cpuinfo");
  std::string line;
  while (std::getline(info, line)) {
    if (line.rfind("model name", 0) == 0) {
      size_t colon = line.find(':');
      if (colon != std::string::npos) {
        size_t start = line.find_first_not_of(" \t", colon + 1);
        return start == std::string::npos ? "unknown" : line.substr(start);
      }
    }
  }
  return "unknown";
}

void writeHeader(std::ostream& out, const std::string& command, uint64_t n,
                 uint64_t seed, int seeds) {
  out << "# command: " << command << "\n";
  out << "# hardware: " << cpuModel() << ", "
      << std::thread::hardware_concurrency() << " hardware threads\n";
  out << "# n: " << n << ", seed: " << seed << ", seeds_averaged: " << seeds
      << "\n";
}

uint64_t cellSeed(uint64_t base, uint64_t dist_idx, double alpha,
                  uint64_t rep) {
  uint64_t s = mixWithSeed(base, dist_idx + 1);
  s = mixWithSeed(s, static_cast<uint64_t>(std::llround(alpha * 1e6)));
  return mixWithSeed(s, rep + 1);
}

// Runs fn(i) for i in [0, count) across hardware threads; results must be
// written to pre-sized slots so output order stays deterministic.
void parallelFor(size_t count, const std::function<void(size_t)>& fn) {
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<size_t>(workers, count == 0 ? 1 : count));
  if (workers <= 1) {
    for (size_t i = 0; i < count; i++) {
      fn(i);
    }
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; w++) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        fn(i);
      }
    });
  }
  for (std::thread& t : pool) {
    t.join();
  }
}

std::string formatParams(const FilterSpec& spec) {
  char buf[64];
  if (spec.family == FilterFamily::kBloom) {
    std::snprintf(buf, sizeof(buf), "k=%d;bpe=%g", spec.hash_count,
                  spec.bits_per_entry);
  } else {
    std::snprintf(buf, sizeof(buf), "f=%d", spec.fingerprint_bits);
  }
  return buf;
}

// ---------------------------------------------------------------------------
// Savings measurement shared by both sweeps

struct CellResult {
  double plain_bpk = 0;
  double alpha = 0;     // measured dominant fraction
  double n_over_n = 0;  // measured distinct values / N
  std::vector<double> filtered_bpk;  // one per spec
};

// One dataset replica: hash once, build the plain CSF once, then one
// filtered build per spec.
CellResult measureCell(const DistChoice& dist, double alpha, uint64_t n,
                       const std::vector<FilterSpec>& specs, uint64_t seed) {
  KeyValueDataset ds = genSynthetic(n, alpha, dist.spec, seed);
  std::vector<Key128> fps;
  fps.reserve(ds.keys.size());
  for (const std::string& key : ds.keys) {
    fps.push_back(fingerprintKey(key));
  }
  const ValueHistogram hist = computeHistogram(ds.values);
  const uint64_t majority = hist.entries[0].value;

  CellResult result;
  result.alpha = hist.dominantFraction();
  result.n_over_n = static_cast<double>(hist.numDistinct()) /
                    static_cast<double>(hist.num_keys);
  AutoIndex plain = buildPlainIndexHashed(fps, ds.values, 3, seed);
  result.plain_bpk = plain.bitsPerKey();
  result.filtered_bpk.reserve(specs.size());
  for (const FilterSpec& spec : specs) {
    AutoIndex filtered =
        buildFilteredIndexHashed(fps, ds.values, majority, spec, 3, seed);
    result.filtered_bpk.push_back(filtered.bitsPerKey());
  }
  return result;
}

struct GridPoint {
  size_t dist_idx = 0;
  double alpha = 0;
};

// ---------------------------------------------------------------------------
// sweep-alpha

int runSweepAlpha(const std::vector<DistChoice>& dists,
                  const std::vector<double>& alphas,
                  const std::vector<FilterFamily>& families, uint64_t n,
                  uint64_t seed, int seeds, const std::string& out_path) {
  const std::vector<FilterSpec> specs = enumerateSpecs(families);
  std::vector<GridPoint> points;
  for (size_t d = 0; d < dists.size(); d++) {
    for (double a : alphas) {
      points.push_back({d, a});
    }
  }
  std::vector<std::vector<CellResult>> results(points.size());
  parallelFor(points.size(), [&](size_t i) {
    std::vector<CellResult> reps;
    for (int rep = 0; rep < seeds; rep++) {
      reps.push_back(measureCell(dists[points[i].dist_idx], points[i].alpha, n,
                                 specs, cellSeed(seed, points[i].dist_idx,
                                                 points[i].alpha, rep)));
    }
    results[i] = std::move(reps);
  });

  CsvOut sink(out_path);
  std::ostream& out = sink.stream();
  writeHeader(out, "sweep-alpha", n, seed, seeds);
  out << "distribution,alpha,family,params,eps,lb,ub,measured_savings_bpk,"
         "plain_bpk,filtered_bpk,decision,seeds_averaged\n";

  const double delta = deltaFor(3);
  // family -> smallest alpha whose best in-family lb is positive
  std::map<std::pair<size_t, int>, double> crossing;
  for (size_t i = 0; i < points.size(); i++) {
    const GridPoint& pt = points[i];
    double alpha = 0, n_over_n = 0;
    for (const CellResult& rep : results[i]) {
      alpha += rep.alpha / seeds;
      n_over_n += rep.n_over_n / seeds;
    }
    for (size_t s = 0; s < specs.size(); s++) {
      const FilterSpec& spec = specs[s];
      double savings = 0, plain = 0, filtered = 0;
      for (const CellResult& rep : results[i]) {
        plain += rep.plain_bpk;
        filtered += rep.filtered_bpk[s];
      }
      plain /= seeds;
      filtered /= seeds;
      savings = plain - filtered;
      const double lb = lowerBound(alpha, delta, spec, n_over_n);
      const double ub = upperBound(alpha, delta, spec, n_over_n);
      if (lb > 0) {
        auto key = std::make_pair(pt.dist_idx, static_cast<int>(spec.family));
        auto it = crossing.find(key);
        if (it == crossing.end() || pt.alpha < it->second) {
          crossing[key] = pt.alpha;
        }
      }
      out << dists[pt.dist_idx].name << ',' << pt.alpha << ','
          << filterFamilyName(spec.family) << ',' << formatParams(spec) << ','
          << spec.eps << ',' << lb << ',' << ub << ',' << savings << ','
          << plain << ',' << filtered << ','
          << (lb > 0 ? "filter" : "nofilter") << ',' << seeds << "\n";
    }
  }
  for (size_t d = 0; d < dists.size(); d++) {
    for (FilterFamily family : families) {
      auto it = crossing.find({d, static_cast<int>(family)});
      out << "# lb_crossing," << dists[d].name << ','
          << filterFamilyName(family) << ',';
      if (it == crossing.end()) {
        out << "none\n";
      } else {
        out << it->second << "\n";
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep-epsilon

int runSweepEpsilon(const std::vector<DistChoice>& dists,
                    const std::vector<double>& alphas,
                    const std::vector<FilterFamily>& families, uint64_t n,
                    uint64_t seed, int seeds, const std::string& out_path) {
  const std::vector<FilterSpec> specs = enumerateSpecs(families);
  if (specs.empty()) {
    throw InvalidArgumentError("sweep-epsilon: empty spec list");
  }
  std::vector<GridPoint> points;
  for (size_t d = 0; d < dists.size(); d++) {
    for (double a : alphas) {
      points.push_back({d, a});
    }
  }
  std::vector<std::vector<CellResult>> results(points.size());
  parallelFor(points.size(), [&](size_t i) {
    std::vector<CellResult> reps;
    for (int rep = 0; rep < seeds; rep++) {
      reps.push_back(measureCell(dists[points[i].dist_idx], points[i].alpha, n,
                                 specs, cellSeed(seed, points[i].dist_idx,
                                                 points[i].alpha, rep)));
    }
    results[i] = std::move(reps);
  });

  CsvOut sink(out_path);
  std::ostream& out = sink.stream();
  writeHeader(out, "sweep-epsilon", n, seed, seeds);
  const double delta = deltaFor(3);
  for (double alpha : alphas) {
    // Continuous optimum of the lower bound for the differentiable Bloom
    // model b(eps) = 1.44*log2(1/eps); informational only.
    const double eps_star =
        alpha > 0 ? 1.44 * std::numbers::log2e * (1.0 - alpha) / (alpha * delta)
                  : std::numeric_limits<double>::infinity();
    out << "# bloom_continuous_eps_star,alpha=" << alpha << ',' << eps_star
        << "\n";
  }
  out << "distribution,alpha,family,params,eps,lb,ub,measured_savings_bpk,"
         "seeds_averaged\n";
  for (size_t i = 0; i < points.size(); i++) {
    const GridPoint& pt = points[i];
    double alpha = 0, n_over_n = 0;
    for (const CellResult& rep : results[i]) {
      alpha += rep.alpha / seeds;
      n_over_n += rep.n_over_n / seeds;
    }
    for (size_t s = 0; s < specs.size(); s++) {
      const FilterSpec& spec = specs[s];
      double savings = 0;
      for (const CellResult& rep : results[i]) {
        savings += rep.plain_bpk - rep.filtered_bpk[s];
      }
      savings /= seeds;
      out << dists[pt.dist_idx].name << ',' << pt.alpha << ','
          << filterFamilyName(spec.family) << ',' << formatParams(spec) << ','
          << spec.eps << ',' << lowerBound(alpha, delta, spec, n_over_n)
          << ',' << upperBound(alpha, delta, spec, n_over_n) << ','
          << savings << ',' << seeds << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench

// Baseline hash map keyed by 128-bit key fingerprints.
struct FpHash {
  size_t operator()(const Key128& k) const { return k.hi; }
};
struct FpEq {
  bool operator()(const Key128& a, const Key128& b) const {
    return a.hi == b.hi && a.lo == b.lo;
  }
};
using BaselineMap = std::unordered_map<Key128, uint64_t, FpHash, FpEq>;

// Estimated resident size: bucket array plus one heap node per entry
// (payload + next pointer + cached hash). An estimate, not an allocation
// measurement.
uint64_t hashMapEstimateBits(const BaselineMap& map) {
  const uint64_t node_bytes =
      sizeof(std::pair<const Key128, uint64_t>) + 2 * sizeof(void*);
  return 8 * (map.bucket_count() * sizeof(void*) + map.size() * node_bytes);
}

double nowSeconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct LatencyResult {
  double mean_ns = 0;
  double median_ns = 0;
};

// Warm pass, then five timed runs over the probe sequence; reports the
// mean of the five per-run means and their median.
template <typename QueryFn>
LatencyResult timeQueries(const std::vector<Key128>& probes, QueryFn&& fn) {
  uint64_t sink = 0;
  for (const Key128& p : probes) {
    sink += fn(p);
  }
  std::vector<double> runs;
  for (int run = 0; run < 5; run++) {
    const double t0 = nowSeconds();
    for (const Key128& p : probes) {
      sink += fn(p);
    }
    const double t1 = nowSeconds();
    runs.push_back((t1 - t0) * 1e9 / static_cast<double>(probes.size()));
  }
  asm volatile("" : "+r"(sink));
  LatencyResult result;
  for (double r : runs) {
    result.mean_ns += r;
  }
  result.mean_ns /= runs.size();
  std::sort(runs.begin(), runs.end());
  result.median_ns = runs[runs.size() / 2];
  return result;
}

struct BenchDataset {
  std::string name;
  KeyValueDataset data;
};

void benchOneDataset(std::ostream& out, const BenchDataset& bench,
                     uint64_t seed, uint64_t probe_count) {
  const KeyValueDataset& ds = bench.data;
  const uint64_t n = ds.keys.size();
  std::vector<Key128> fps;
  fps.reserve(n);
  for (const std::string& key : ds.keys) {
    fps.push_back(fingerprintKey(key));
  }

  // Probe sequence: random built keys, fixed before any timing.
  SplitMix64 rng(mixWithSeed(seed, 0x70726f6265ull));
  std::vector<Key128> probes;
  probes.reserve(probe_count);
  std::vector<uint64_t> probe_values;
  probe_values.reserve(probe_count);
  for (uint64_t i = 0; i < probe_count; i++) {
    const uint64_t j = rng.nextBounded(n);
    probes.push_back(fps[j]);
    probe_values.push_back(ds.values[j]);
  }

  struct Row {
    std::string method;
    double bpk = 0;
    LatencyResult latency;
    double build_s = 0;
  };
  std::vector<Row> rows;

  auto verifyExact = [&](auto&& query, const std::string& method) {
    for (size_t i = 0; i < fps.size(); i++) {
      if (query(fps[i]) != ds.values[i]) {
        throw AutoCsfError("bench: " + method +
                           " returned a wrong value for a built key");
      }
    }
  };

  {
    double t0 = nowSeconds();
    AutoBuildResult res = buildAutoHashed(fps, ds.values, 3, enumerateAllSpecs(), seed);
    double build_s = nowSeconds() - t0;
    const AutoIndex& idx = res.index;
    auto q = [&](const Key128& p) { return idx.queryHashed(p).value_or(0); };
    verifyExact(q, "AutoCSF");
    rows.push_back({"AutoCSF", idx.bitsPerKey(), timeQueries(probes, q), build_s});
  }
  {
    double t0 = nowSeconds();
    BcsfBuildResult res = buildBcsfHashed(fps, ds.values, 3, seed);
    double build_s = nowSeconds() - t0;
    const AutoIndex& idx = res.index;
    auto q = [&](const Key128& p) { return idx.queryHashed(p).value_or(0); };
    verifyExact(q, "BCSF");
    rows.push_back({"BCSF", idx.bitsPerKey(), timeQueries(probes, q), build_s});
  }
  {
    double t0 = nowSeconds();
    AutoIndex idx = buildPlainIndexHashed(fps, ds.values, 3, seed);
    double build_s = nowSeconds() - t0;
    auto q = [&](const Key128& p) { return idx.queryHashed(p).value_or(0); };
    verifyExact(q, "PlainCSF");
    rows.push_back({"PlainCSF", idx.bitsPerKey(), timeQueries(probes, q), build_s});
  }
  {
    double t0 = nowSeconds();
    BaselineMap map;
    map.reserve(n);
    for (size_t i = 0; i < n; i++) {
      map.emplace(fps[i], ds.values[i]);
    }
    double build_s = nowSeconds() - t0;
    auto q = [&](const Key128& p) {
      auto it = map.find(p);
      return it == map.end() ? 0 : it->second;
    };
    verifyExact(q, "HashMap");
    rows.push_back({"HashMap",
                    static_cast<double>(hashMapEstimateBits(map)) / n,
                    timeQueries(probes, q), build_s});
  }

  for (const Row& row : rows) {
    out << row.method << ',' << bench.name << ',' << n << ',' << row.bpk << ','
        << row.latency.mean_ns << ',' << row.latency.median_ns << ','
        << row.build_s << "\n";
  }
}

int runBench(const std::vector<DistChoice>& dists,
             const std::vector<double>& alphas, uint64_t n, uint64_t seed,
             const std::string& kmer_table, int k, uint64_t probe_count,
             const std::string& out_path) {
  std::vector<BenchDataset> benches;
  if (!kmer_table.empty()) {
    std::string name = kmer_table;
    const size_t slash = name.find_last_of('/');
    if (slash != std::string::npos) {
      name = name.substr(slash + 1);
    }
    benches.push_back({name, loadKmerTable(kmer_table, k)});
  } else {
    for (size_t d = 0; d < dists.size(); d++) {
      for (double a : alphas) {
        char label[64];
        std::snprintf(label, sizeof(label), "%s-a%.2f", dists[d].name.c_str(),
                      a);
        benches.push_back(
            {label, genSynthetic(n, a, dists[d].spec, cellSeed(seed, d, a, 0))});
      }
    }
  }

  CsvOut sink(out_path);
  std::ostream& out = sink.stream();
  writeHeader(out, "bench", n, seed, 1);
  out << "# latency: warm cache, " << probe_count
      << " built-key probes, mean of 5 runs and median of 5 runs\n";
  out << "# HashMap bpk is a structure-size estimate "
         "(buckets + per-node footprint), not a heap measurement\n";
  out << "method,dataset,n,bpk,query_ns_mean,query_ns_median,build_s\n";
  for (const BenchDataset& bench : benches) {
    benchOneDataset(out, bench, seed, probe_count);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// build / query

int inferKmerLength(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw AutoCsfError("cannot open for reading: " + path);
  }
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError(path + ": first data line has no key before a tab");
    }
    return static_cast<int>(tab);
  }
  throw ParseError(path + ": no data lines");
}

json specToJson(const FilterSpec& spec) {
  json j;
  j["family"] = filterFamilyName(spec.family);
  j["params"] = formatParams(spec);
  j["eps"] = spec.eps;
  j["bpk"] = spec.bpk;
  return j;
}

json reportToJson(const BoundReport& report) {
  json j;
  j["alpha"] = report.alpha;
  j["n_over_N"] = report.n_over_N;
  j["delta"] = report.delta;
  j["decision"] = report.use_filter ? "filter" : "nofilter";
  j["lb_star"] = report.lbStar();
  j["ub_star"] = report.ubStar();
  j["best_spec"] = specToJson(report.best().spec);
  json rows = json::array();
  for (const BoundRow& row : report.rows) {
    json r = specToJson(row.spec);
    r["lb"] = row.lb;
    r["ub"] = row.ub;
    rows.push_back(r);
  }
  j["specs"] = rows;
  return j;
}

int runBuild(const std::string& kmer_table, int k, uint64_t seed,
             const std::string& out_path) {
  if (out_path.empty()) {
    throw InvalidArgumentError("build: --out is required");
  }
  if (k <= 0) {
    k = inferKmerLength(kmer_table);
  }
  KeyValueDataset ds = loadKmerTable(kmer_table, k);
  AutoBuildResult res = buildAuto(ds, 3, enumerateAllSpecs(), seed);
  res.index.setKeyMode(KeyMode::kPackedKmer, k);
  res.index.saveFile(out_path);

  json j = reportToJson(res.report);
  j["k"] = k;
  j["num_keys"] = res.index.numKeys();
  j["passthrough_f0"] = res.index.passthroughCount();
  j["size_bits"] = res.index.sizeBits();
  j["bpk"] = res.index.bitsPerKey();
  j["out"] = out_path;
  std::cout << j.dump(2) << std::endl;
  return 0;
}

int runQuery(const std::string& index_path) {
  AutoIndex index = AutoIndex::loadFile(index_path);
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    std::optional<uint64_t> value;
    if (index.keyMode() == KeyMode::kPackedKmer) {
      try {
        if (line.size() != static_cast<size_t>(index.kmerK())) {
          // A wrong-length line would otherwise alias a zero-padded k-mer.
          throw ParseError("k-mer length mismatch");
        }
        value = index.query(kmerKeyBytes(packKmer(line), index.kmerK()));
      } catch (const ParseError&) {
        value = std::nullopt;  // unpackable line can never be a built key
      }
    } else {
      value = index.query(line);
    }
    if (value) {
      std::cout << *value << "\n";
    } else {
      std::cout << "NOT_DECODABLE\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compressed static functions with automatic pre-filter selection"};
  app.require_subcommand(1);

  std::string dist_text = "uniform100,zipf,unique";
  std::string families_text = "bloom,xor,binaryfuse";
  std::string alphas_text;
  std::string kmer_table;
  std::string out_path;
  uint64_t n = 0;
  uint64_t seed = 1;
  int seeds = 3;
  int k = 0;
  uint64_t probes = 1000000;

  CLI::App* sweep_alpha =
      app.add_subcommand("sweep-alpha",
                         "Measure savings across a majority-fraction grid");
  sweep_alpha->add_option("--dist", dist_text, "Distributions (comma list)");
  sweep_alpha->add_option("--alphas", alphas_text,
                          "Alphas (comma list; default 0.50..0.99 step 0.01)");
  sweep_alpha->add_option("--families", families_text, "Filter families");
  sweep_alpha->add_option("--n", n, "Keys per dataset (default 20000)");
  sweep_alpha->add_option("--seed", seed, "Base RNG seed");
  sweep_alpha->add_option("--seeds", seeds, "Replicas averaged per point")
      ->check(CLI::PositiveNumber);
  sweep_alpha->add_option("--out", out_path, "CSV output path (default stdout)");

  CLI::App* sweep_eps = app.add_subcommand(
      "sweep-epsilon", "Measure savings across the discrete spec grid");
  sweep_eps->add_option("--dist", dist_text, "Distributions (comma list)");
  sweep_eps->add_option("--alphas", alphas_text,
                        "Alphas (comma list; default 0.7,0.9)");
  sweep_eps->add_option("--families", families_text, "Filter families");
  sweep_eps->add_option("--n", n, "Keys per dataset (default 20000)");
  sweep_eps->add_option("--seed", seed, "Base RNG seed");
  sweep_eps->add_option("--seeds", seeds, "Replicas averaged per point")
      ->check(CLI::PositiveNumber);
  sweep_eps->add_option("--out", out_path, "CSV output path (default stdout)");

  CLI::App* bench = app.add_subcommand(
      "bench", "Size/latency/build-time comparison against baselines");
  bench->add_option("--dist", dist_text, "Distributions (comma list)");
  bench->add_option("--alphas", alphas_text,
                    "Alphas (comma list; default 0.5,0.8,0.95)");
  bench->add_option("--n", n, "Keys per dataset (default 100000)");
  bench->add_option("--seed", seed, "Base RNG seed");
  bench->add_option("--kmer-table", kmer_table,
                    "Bench a k-mer count TSV instead of synthetic data");
  bench->add_option("--k", k, "K-mer length (default: inferred)");
  bench->add_option("--probes", probes, "Probe count per timing run")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", out_path, "CSV output path (default stdout)");

  CLI::App* build = app.add_subcommand("build", "Build an index file from a TSV");
  build->add_option("--kmer-table", kmer_table, "Input k-mer count TSV")
      ->required();
  build->add_option("--k", k, "K-mer length (default: inferred)");
  build->add_option("--seed", seed, "Build seed");
  build->add_option("--out", out_path, "Index output path")->required();

  CLI::App* query = app.add_subcommand(
      "query", "Load an index file and answer keys from stdin");
  std::string index_path;
  query->add_option("index", index_path, "Index file produced by build")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(sweep_alpha)) {
      std::vector<double> alphas;
      if (alphas_text.empty()) {
        for (int c = 50; c <= 99; c++) {
          alphas.push_back(c / 100.0);
        }
      } else {
        alphas = parseAlphas(alphas_text);
      }
      return runSweepAlpha(parseDists(dist_text), alphas,
                           parseFamilies(families_text), n == 0 ? 20000 : n,
                           seed, seeds, out_path);
    }
    if (app.got_subcommand(sweep_eps)) {
      std::vector<double> alphas =
          alphas_text.empty() ? std::vector<double>{0.7, 0.9}
                              : parseAlphas(alphas_text);
      return runSweepEpsilon(parseDists(dist_text), alphas,
                             parseFamilies(families_text), n == 0 ? 20000 : n,
                             seed, seeds, out_path);
    }
    if (app.got_subcommand(bench)) {
      std::vector<double> alphas =
          alphas_text.empty() ? std::vector<double>{0.5, 0.8, 0.95}
                              : parseAlphas(alphas_text);
      return runBench(parseDists(dist_text), alphas, n == 0 ? 100000 : n, seed,
                      kmer_table, k, probes, out_path);
    }
    if (app.got_subcommand(build)) {
      return runBuild(kmer_table, k, seed, out_path);
    }
    if (app.got_subcommand(query)) {
      return runQuery(index_path);
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << std::endl;
    return 1;
  }
  return 0;
}
