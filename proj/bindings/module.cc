// Python bindings for the core operations: synthetic data, histograms,
// bound evaluation, index build/query, and serialization.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include <autocsf/auto_csf.h>
#include <autocsf/bcsf.h>
#include <autocsf/csf.h>
#include <autocsf/dataset.h>
#include <autocsf/errors.h>
#include <autocsf/filters.h>

namespace py = pybind11;
using namespace autocsf;

namespace {

MinoritySpec minoritySpecFromName(const std::string& dist, double zipf_s,
                                  uint64_t uniform_m) {
  if (dist == "uniform100" || dist == "uniform") {
    return MinoritySpec::Uniform(uniform_m);
  }
  if (dist == "zipf") {
    return MinoritySpec::Zipf(zipf_s);
  }
  if (dist == "unique") {
    return MinoritySpec::Unique();
  }
  throw InvalidArgumentError("unknown distribution: " + dist);
}

py::dict specToDict(const FilterSpec& spec) {
  py::dict d;
  d["family"] = std::string(filterFamilyName(spec.family));
  d["hash_count"] = spec.hash_count;
  d["bits_per_entry"] = spec.bits_per_entry;
  d["fingerprint_bits"] = spec.fingerprint_bits;
  d["eps"] = spec.eps;
  d["bpk"] = spec.bpk;
  d["describe"] = spec.describe();
  return d;
}

py::dict reportToDict(const BoundReport& report) {
  py::dict d;
  d["alpha"] = report.alpha;
  d["n_over_N"] = report.n_over_N;
  d["delta"] = report.delta;
  d["use_filter"] = report.use_filter;
  d["lb_star"] = report.lbStar();
  d["ub_star"] = report.ubStar();
  d["best_spec"] = specToDict(report.best().spec);
  py::list rows;
  for (const BoundRow& row : report.rows) {
    py::dict r = specToDict(row.spec);
    r["lb"] = row.lb;
    r["ub"] = row.ub;
    rows.append(r);
  }
  d["rows"] = rows;
  return d;
}

py::dict bcsfToDict(const BcsfDecision& decision) {
  py::dict d;
  d["alpha"] = decision.alpha;
  d["h0"] = decision.h0;
  d["c_bf"] = decision.c_bf;
  d["c_csf"] = decision.c_csf;
  d["eps_star"] = decision.eps_star;
  d["alpha_threshold"] = decision.alpha_threshold;
  d["use_filter"] = decision.use_filter;
  d["bits_per_entry"] = decision.bits_per_entry;
  d["hash_count"] = decision.hash_count;
  return d;
}

KeyValueDataset datasetFromPairs(const std::vector<py::bytes>& keys,
                                 const std::vector<uint64_t>& values) {
  if (keys.size() != values.size()) {
    throw InvalidArgumentError("keys and values must have equal length");
  }
  KeyValueDataset ds;
  ds.keys.reserve(keys.size());
  for (const py::bytes& key : keys) {
    ds.keys.push_back(std::string(key));
  }
  ds.values = values;
  return ds;
}

}  // namespace

PYBIND11_MODULE(_autocsf, m) {
  m.doc() =
      "Compressed static functions with bound-driven pre-filter selection";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InvalidArgumentError>(m, "InvalidArgumentError",
                                               PyExc_ValueError);
  py::register_exception<UnsolvableSystemError>(m, "UnsolvableSystemError",
                                                PyExc_RuntimeError);

  py::class_<FilterSpec>(m, "FilterSpec")
      .def_property_readonly(
          "family",
          [](const FilterSpec& s) { return std::string(filterFamilyName(s.family)); })
      .def_readonly("hash_count", &FilterSpec::hash_count)
      .def_readonly("bits_per_entry", &FilterSpec::bits_per_entry)
      .def_readonly("fingerprint_bits", &FilterSpec::fingerprint_bits)
      .def_readonly("eps", &FilterSpec::eps)
      .def_readonly("bpk", &FilterSpec::bpk)
      .def("to_dict", &specToDict)
      .def("__repr__", [](const FilterSpec& s) {
        return "FilterSpec(" + s.describe() + ")";
      });

  py::class_<AutoIndex>(m, "AutoIndex")
      .def_property_readonly("is_filtered", &AutoIndex::isFiltered)
      .def_property_readonly("majority_value", &AutoIndex::majorityValue)
      .def_property_readonly("num_keys", &AutoIndex::numKeys)
      .def_property_readonly("size_bits", &AutoIndex::sizeBits)
      .def_property_readonly("bits_per_key", &AutoIndex::bitsPerKey)
      .def_property_readonly("passthrough_count", &AutoIndex::passthroughCount)
      .def(
          "query",
          [](const AutoIndex& idx, const py::bytes& key) {
            return idx.query(std::string(key));
          },
          py::arg("key"),
          "Exact value for built keys; arbitrary value or None otherwise")
      .def("save", &AutoIndex::saveFile, py::arg("path"))
      .def_static("load", &AutoIndex::loadFile, py::arg("path"))
      .def("serialize",
           [](const AutoIndex& idx) {
             ByteWriter out;
             idx.serialize(out);
             const std::vector<uint8_t>& bytes = out.bytes();
             return py::bytes(reinterpret_cast<const char*>(bytes.data()),
                              bytes.size());
           })
      .def_static("deserialize", [](const py::bytes& blob) {
        std::string data(blob);
        ByteReader reader(reinterpret_cast<const uint8_t*>(data.data()),
                          data.size());
        return AutoIndex::deserialize(reader);
      });

  m.def(
      "gen_synthetic",
      [](uint64_t n, double alpha, const std::string& dist, uint64_t seed,
         double zipf_s, uint64_t uniform_m) {
        KeyValueDataset ds = genSynthetic(
            n, alpha, minoritySpecFromName(dist, zipf_s, uniform_m), seed);
        std::vector<py::bytes> keys;
        keys.reserve(ds.keys.size());
        for (const std::string& key : ds.keys) {
          keys.push_back(py::bytes(key));
        }
        return py::make_tuple(keys, ds.values);
      },
      py::arg("n"), py::arg("alpha"), py::arg("dist"), py::arg("seed") = 1,
      py::arg("zipf_s") = 1.5, py::arg("uniform_m") = 100,
      "Synthetic dataset: (keys, values) with majority fraction alpha");

  m.def(
      "load_kmer_table",
      [](const std::string& path, int k) {
        KeyValueDataset ds = loadKmerTable(path, k);
        std::vector<py::bytes> keys;
        keys.reserve(ds.keys.size());
        for (const std::string& key : ds.keys) {
          keys.push_back(py::bytes(key));
        }
        return py::make_tuple(keys, ds.values);
      },
      py::arg("path"), py::arg("k"),
      "Parse a kmer<TAB>count TSV into packed keys and counts");

  m.def(
      "pack_kmer",
      [](const std::string& kmer) {
        return py::bytes(
            kmerKeyBytes(packKmer(kmer), static_cast<int>(kmer.size())));
      },
      py::arg("kmer"), "2-bit-packed key bytes for an ACGT string");

  m.def("enumerate_all_specs", &enumerateAllSpecs,
        "The full discrete filter configuration grid");
  m.def("lower_bound", &lowerBound, py::arg("alpha"), py::arg("delta"),
        py::arg("spec"), py::arg("n_over_N"));
  m.def("upper_bound", &upperBound, py::arg("alpha"), py::arg("delta"),
        py::arg("spec"), py::arg("n_over_N"));
  m.def("delta_for", &deltaFor, py::arg("num_hashes"));

  m.def(
      "decide",
      [](const std::vector<uint64_t>& values, int num_hashes) {
        return reportToDict(
            decide(computeHistogram(values), num_hashes, enumerateAllSpecs()));
      },
      py::arg("values"), py::arg("num_hashes") = 3,
      "Bound report and filter/no-filter decision for a value multiset");

  m.def(
      "build_auto",
      [](const std::vector<py::bytes>& keys, const std::vector<uint64_t>& values,
         int num_hashes, uint64_t seed) {
        AutoBuildResult res = buildAuto(datasetFromPairs(keys, values),
                                        num_hashes, enumerateAllSpecs(), seed);
        return py::make_tuple(std::move(res.index), reportToDict(res.report));
      },
      py::arg("keys"), py::arg("values"), py::arg("num_hashes") = 3,
      py::arg("seed") = 1,
      "Build with automatic filter selection; returns (index, report)");

  m.def(
      "build_plain",
      [](const std::vector<py::bytes>& keys, const std::vector<uint64_t>& values,
         int num_hashes, uint64_t seed) {
        return buildPlainIndex(datasetFromPairs(keys, values), num_hashes,
                               seed);
      },
      py::arg("keys"), py::arg("values"), py::arg("num_hashes") = 3,
      py::arg("seed") = 1, "Plain CSF over all pairs, no filter");

  m.def(
      "build_bcsf",
      [](const std::vector<py::bytes>& keys, const std::vector<uint64_t>& values,
         int num_hashes, uint64_t seed) {
        BcsfBuildResult res =
            buildBcsf(datasetFromPairs(keys, values), num_hashes, seed);
        return py::make_tuple(std::move(res.index), bcsfToDict(res.decision));
      },
      py::arg("keys"), py::arg("values"), py::arg("num_hashes") = 3,
      py::arg("seed") = 1,
      "Entropy-heuristic baseline build; returns (index, decision)");

  m.def(
      "measured_savings",
      [](const std::vector<py::bytes>& keys, const std::vector<uint64_t>& values,
         const FilterSpec& spec, int num_hashes, uint64_t seed) {
        return measuredSavings(datasetFromPairs(keys, values), num_hashes, spec,
                               seed);
      },
      py::arg("keys"), py::arg("values"), py::arg("spec"),
      py::arg("num_hashes") = 3, py::arg("seed") = 1,
      "(plain size - filtered size) / N in bits per key");

  m.attr("__version__") = "0.1.0";
}
