#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "exchpairs/direction.hpp"
#include "exchpairs/error.hpp"
#include "exchpairs/generator.hpp"
#include "exchpairs/synthnn.hpp"
#include "exchpairs/weights.hpp"

namespace exchpairs {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Number formatting.

// Shortest-of-%g rendering with the given number of significant digits.
inline std::string format_double(double v, int sig) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig, v);
  return buf;
}

// Quantizes v to `sig` significant decimal digits by a round trip through
// text. Reports store quantized values so serialization is lossless.
inline double round_sig(double v, int sig = 12) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_double(v, sig).c_str(), nullptr);
}

namespace detail {

inline void require_finite(double v, const std::string& where) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("non-finite value in " + where);
  }
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw LoadError("cannot write " + path.string());
  out << text;
  if (!out) throw LoadError("write failed for " + path.string());
}

inline ordered_json parse_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw LoadError("invalid JSON in " + path.string());
  return j;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline bool parse_double_strict(const std::string& tok, double* out) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end != begin + tok.size() || tok.empty() || !std::isfinite(v)) {
    return false;
  }
  *out = v;
  return true;
}

inline bool parse_size_strict(const std::string& tok, std::size_t* out) {
  double v = 0.0;
  if (!parse_double_strict(tok, &v)) return false;
  if (v < 0.0 || v != std::floor(v)) return false;
  *out = static_cast<std::size_t>(v);
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Benchmark ingestion.

struct BenchmarkPair {
  std::string id;
  std::vector<double> xs;
  std::vector<double> ys;
  double weight = 1.0;
  Direction ground_truth = Direction::x_to_y;
  bool skipped = false;
  std::string reason;

  bool operator==(const BenchmarkPair&) const = default;
};

// Reads a cause-effect benchmark directory: a `pairmeta.txt` whose rows are
// `id cause_start cause_end effect_start effect_end weight` (1-based column
// ranges) plus one whitespace-separated numeric table per pair in
// `pair<id>.txt`. Pairs with multi-column cause or effect are kept but marked
// skipped (reason "multidimensional"); unreadable or malformed tables skip
// the one pair with a reason. xs always holds the cause column, so
// ground_truth is XtoY for every loaded pair. Output is sorted by id and
// loaded + skipped always equals the metadata row count.
inline std::vector<BenchmarkPair> load_benchmark(
    const std::filesystem::path& dir) {
  const std::filesystem::path meta_path = dir / "pairmeta.txt";
  if (!std::filesystem::exists(meta_path)) {
    throw LoadError("missing metadata file: " + meta_path.string());
  }

  std::vector<BenchmarkPair> pairs;
  std::istringstream meta(detail::read_text_file(meta_path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(meta, line)) {
    ++lineno;
    const std::vector<std::string> tok = detail::split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 6) {
      throw LoadError("malformed metadata row " + std::to_string(lineno) +
                      " in " + meta_path.string());
    }
    std::size_t c0 = 0, c1 = 0, e0 = 0, e1 = 0;
    double w = 0.0;
    if (!detail::parse_size_strict(tok[1], &c0) ||
        !detail::parse_size_strict(tok[2], &c1) ||
        !detail::parse_size_strict(tok[3], &e0) ||
        !detail::parse_size_strict(tok[4], &e1) ||
        !detail::parse_double_strict(tok[5], &w) || c0 == 0 || e0 == 0 ||
        w < 0.0) {
      throw LoadError("malformed metadata row " + std::to_string(lineno) +
                      " in " + meta_path.string());
    }

    BenchmarkPair pair;
    pair.id = tok[0];
    pair.weight = w;
    if (c0 != c1 || e0 != e1) {
      pair.skipped = true;
      pair.reason = "multidimensional";
      pairs.push_back(std::move(pair));
      continue;
    }

    const std::filesystem::path data_path = dir / ("pair" + pair.id + ".txt");
    if (!std::filesystem::exists(data_path)) {
      pair.skipped = true;
      pair.reason = "missing data file";
      pairs.push_back(std::move(pair));
      continue;
    }

    std::istringstream data(detail::read_text_file(data_path));
    const std::size_t need = std::max(c0, e0);
    std::string row;
    std::size_t rowno = 0;
    bool ok = true;
    while (ok && std::getline(data, row)) {
      ++rowno;
      const std::vector<std::string> cells = detail::split_ws(row);
      if (cells.empty()) continue;
      if (cells.size() < need) {
        pair.reason = "malformed row " + std::to_string(rowno);
        ok = false;
        break;
      }
      double x = 0.0, y = 0.0;
      for (std::size_t c = 0; c < cells.size() && ok; ++c) {
        double v = 0.0;
        if (!detail::parse_double_strict(cells[c], &v)) {
          pair.reason = "malformed row " + std::to_string(rowno);
          ok = false;
        } else if (c + 1 == c0) {
          x = v;
        } else if (c + 1 == e0) {
          y = v;
        }
      }
      if (!ok) break;
      pair.xs.push_back(x);
      pair.ys.push_back(y);
    }
    if (ok && pair.xs.empty()) {
      pair.reason = "empty data file";
      ok = false;
    }
    if (!ok) {
      pair.skipped = true;
      pair.xs.clear();
      pair.ys.clear();
    }
    pairs.push_back(std::move(pair));
  }

  std::sort(pairs.begin(), pairs.end(),
            [](const BenchmarkPair& a, const BenchmarkPair& b) {
              return a.id < b.id;
            });
  return pairs;
}

// ---------------------------------------------------------------------------
// Dataset directories: manifest.json plus one two-column CSV per example.

namespace detail {

inline ordered_json hyper_to_json(const GenHyper& h) {
  ordered_json j;
  j["mu_mu"] = h.mu_mu;
  j["sigma_mu"] = h.sigma_mu;
  j["mu_sigma"] = h.mu_sigma;
  j["sigma_sigma"] = h.sigma_sigma;
  j["gamma_m"] = h.gamma_m;
  j["gamma_v"] = h.gamma_v;
  j["max_k"] = h.max_k;
  j["max_o"] = h.max_o;
  j["momentum_p"] = h.momentum_p;
  j["delta_t"] = h.delta_t;
  j["delta_t_from_spacing"] = h.delta_t_from_spacing;
  return j;
}

inline GenHyper hyper_from_json(const ordered_json& j) {
  GenHyper h;
  h.mu_mu = j.at("mu_mu").get<double>();
  h.sigma_mu = j.at("sigma_mu").get<double>();
  h.mu_sigma = j.at("mu_sigma").get<double>();
  h.sigma_sigma = j.at("sigma_sigma").get<double>();
  h.gamma_m = j.at("gamma_m").get<double>();
  h.gamma_v = j.at("gamma_v").get<double>();
  h.max_k = j.at("max_k").get<int>();
  h.max_o = j.at("max_o").get<int>();
  h.momentum_p = j.at("momentum_p").get<double>();
  h.delta_t = j.at("delta_t").get<double>();
  h.delta_t_from_spacing = j.at("delta_t_from_spacing").get<bool>();
  return h;
}

inline ordered_json config_to_json(const GenConfig& c) {
  ordered_json j;
  j["prior_theta"] = to_string(c.prior_theta);
  j["prior_psi"] = to_string(c.prior_psi);
  j["mechanism"] = to_string(c.mechanism);
  j["sigma_x"] = c.sigma_x;
  j["sigma_y"] = c.sigma_y;
  j["n_samples"] = c.n_samples;
  j["seed"] = c.seed;
  j["hyper"] = hyper_to_json(c.hyper);
  return j;
}

inline GenConfig config_from_json(const ordered_json& j) {
  GenConfig c;
  c.prior_theta = prior_from_string(j.at("prior_theta").get<std::string>());
  c.prior_psi = prior_from_string(j.at("prior_psi").get<std::string>());
  c.mechanism = mechanism_from_string(j.at("mechanism").get<std::string>());
  c.sigma_x = j.at("sigma_x").get<double>();
  c.sigma_y = j.at("sigma_y").get<double>();
  c.n_samples = j.at("n_samples").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.hyper = hyper_from_json(j.at("hyper"));
  return c;
}

inline std::string example_file_name(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "ex%05zu.csv", index);
  return buf;
}

}  // namespace detail

// Writes manifest.json plus ex{index:05}.csv files (header `x,y`, 17
// significant digits). The manifest holds the dataset seed, the base config,
// the cell grid with unit weights, and the file list with per-example cell,
// label, and weight.
inline void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  ordered_json manifest;
  manifest["format_version"] = 1;
  manifest["seed"] = ds.seed;
  manifest["per_cell"] = ds.per_cell;
  manifest["noise_add"] = ds.noise_add;
  manifest["noise_mult"] = ds.noise_mult;
  manifest["noise_seed"] = ds.noise_seed;
  manifest["base"] = detail::config_to_json(ds.base);
  manifest["cells"] = ordered_json::array();
  for (const CellSpec& cell : ds.cells) {
    ordered_json c;
    c["name"] = cell.name();
    c["mechanism"] = to_string(cell.mechanism);
    c["prior_theta"] = to_string(cell.prior_theta);
    c["prior_psi"] = to_string(cell.prior_psi);
    c["weight"] = 1.0;
    manifest["cells"].push_back(std::move(c));
  }
  manifest["examples"] = ordered_json::array();
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    const DatasetExample& de = ds.examples[i];
    ordered_json e;
    e["file"] = detail::example_file_name(i);
    e["cell"] = de.cell;
    e["label"] = to_string(de.example.label);
    e["n"] = de.example.xs.size();
    e["weight"] = de.example.weight;
    manifest["examples"].push_back(std::move(e));

    std::string csv = "x,y\n";
    for (std::size_t k = 0; k < de.example.xs.size(); ++k) {
      csv += format_double(de.example.xs[k], 17);
      csv += ',';
      csv += format_double(de.example.ys[k], 17);
      csv += '\n';
    }
    detail::write_text_file(dir / detail::example_file_name(i), csv);
  }
  detail::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

// Restores a dataset directory written by save_dataset. Sample data, labels,
// weights, cells, and the base config round-trip exactly; the per-example
// generator substreams are not persisted, so example configs come back as
// the base config with the cell's fields applied.
inline Dataset load_dataset(const std::filesystem::path& dir) {
  const ordered_json manifest = detail::parse_json_file(dir / "manifest.json");
  Dataset ds;
  try {
    if (manifest.at("format_version").get<int>() != 1) {
      throw LoadError("unsupported manifest version in " + dir.string());
    }
    ds.seed = manifest.at("seed").get<std::uint64_t>();
    ds.per_cell = manifest.at("per_cell").get<std::size_t>();
    ds.noise_add = manifest.at("noise_add").get<double>();
    ds.noise_mult = manifest.at("noise_mult").get<double>();
    ds.noise_seed = manifest.at("noise_seed").get<std::uint64_t>();
    ds.base = detail::config_from_json(manifest.at("base"));
    for (const ordered_json& c : manifest.at("cells")) {
      CellSpec cell;
      cell.mechanism =
          mechanism_from_string(c.at("mechanism").get<std::string>());
      cell.prior_theta =
          prior_from_string(c.at("prior_theta").get<std::string>());
      cell.prior_psi = prior_from_string(c.at("prior_psi").get<std::string>());
      ds.cells.push_back(cell);
    }
    for (const ordered_json& e : manifest.at("examples")) {
      DatasetExample de;
      de.cell = e.at("cell").get<std::size_t>();
      if (de.cell >= ds.cells.size()) {
        throw LoadError("cell index out of range in " + dir.string());
      }
      de.example.label =
          direction_from_string(e.at("label").get<std::string>());
      de.example.weight = e.at("weight").get<double>();
      de.example.config = ds.base;
      de.example.config.mechanism = ds.cells[de.cell].mechanism;
      de.example.config.prior_theta = ds.cells[de.cell].prior_theta;
      de.example.config.prior_psi = ds.cells[de.cell].prior_psi;

      const std::string file = e.at("file").get<std::string>();
      std::istringstream csv(detail::read_text_file(dir / file));
      std::string row;
      if (!std::getline(csv, row) || row != "x,y") {
        throw LoadError("bad CSV header in " + (dir / file).string());
      }
      while (std::getline(csv, row)) {
        if (row.empty()) continue;
        const std::size_t comma = row.find(',');
        double x = 0.0, y = 0.0;
        if (comma == std::string::npos ||
            !detail::parse_double_strict(row.substr(0, comma), &x) ||
            !detail::parse_double_strict(row.substr(comma + 1), &y)) {
          throw LoadError("bad CSV row in " + (dir / file).string());
        }
        de.example.xs.push_back(x);
        de.example.ys.push_back(y);
      }
      if (de.example.xs.size() != e.at("n").get<std::size_t>()) {
        throw LoadError("row count mismatch in " + (dir / file).string());
      }
      ds.examples.push_back(std::move(de));
    }
  } catch (const ordered_json::exception& ex) {
    throw LoadError("bad manifest in " + dir.string() + ": " + ex.what());
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Evaluation reports.

struct MethodEval {
  std::string method;
  double auroc = 0.0;
  double accuracy = 0.0;
  double weighted_auroc = 0.0;
  double weighted_accuracy = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  std::vector<double> per_cell_auroc;

  bool operator==(const MethodEval&) const = default;
};

struct EvalReport {
  std::string source;
  double threshold = kIndependenceThreshold;
  std::vector<std::string> cells;
  std::vector<std::string> independent;
  std::vector<MethodEval> methods;
  ordered_json config = ordered_json::object();

  bool operator==(const EvalReport&) const = default;

  // Reports carry 12-significant-digit metrics; quantizing on construction
  // makes save/load the identity.
  void quantize() {
    threshold = round_sig(threshold);
    for (MethodEval& m : methods) {
      m.auroc = round_sig(m.auroc);
      m.accuracy = round_sig(m.accuracy);
      m.weighted_auroc = round_sig(m.weighted_auroc);
      m.weighted_accuracy = round_sig(m.weighted_accuracy);
      for (double& v : m.per_cell_auroc) v = round_sig(v);
    }
  }
};

namespace detail {

inline void require_finite_json(const ordered_json& j,
                                const std::string& where) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) {
    throw std::invalid_argument("non-finite value in " + where);
  }
  if (j.is_object() || j.is_array()) {
    for (const auto& item : j) require_finite_json(item, where);
  }
}

}  // namespace detail

// Fixed key order, metrics quantized to 12 significant digits, NaN rejected.
inline ordered_json report_to_json(const EvalReport& report) {
  EvalReport r = report;
  r.quantize();
  detail::require_finite(r.threshold, "report threshold");
  detail::require_finite_json(r.config, "report config");

  ordered_json j;
  j["format_version"] = 1;
  j["source"] = r.source;
  j["threshold"] = r.threshold;
  j["cells"] = r.cells;
  j["independent"] = r.independent;
  j["methods"] = ordered_json::array();
  for (const MethodEval& m : r.methods) {
    detail::require_finite(m.auroc, "method " + m.method);
    detail::require_finite(m.accuracy, "method " + m.method);
    detail::require_finite(m.weighted_auroc, "method " + m.method);
    detail::require_finite(m.weighted_accuracy, "method " + m.method);
    for (double v : m.per_cell_auroc) {
      detail::require_finite(v, "method " + m.method);
    }
    ordered_json e;
    e["method"] = m.method;
    e["auroc"] = m.auroc;
    e["accuracy"] = m.accuracy;
    e["weighted_auroc"] = m.weighted_auroc;
    e["weighted_accuracy"] = m.weighted_accuracy;
    e["evaluated"] = m.evaluated;
    e["skipped"] = m.skipped;
    e["per_cell_auroc"] = m.per_cell_auroc;
    j["methods"].push_back(std::move(e));
  }
  j["config"] = r.config;
  return j;
}

inline void save_report(const EvalReport& report,
                        const std::filesystem::path& path) {
  detail::write_text_file(path, report_to_json(report).dump(2) + "\n");
}

inline EvalReport load_report(const std::filesystem::path& path) {
  const ordered_json j = detail::parse_json_file(path);
  EvalReport r;
  try {
    if (j.at("format_version").get<int>() != 1) {
      throw LoadError("unsupported report version in " + path.string());
    }
    r.source = j.at("source").get<std::string>();
    r.threshold = j.at("threshold").get<double>();
    r.cells = j.at("cells").get<std::vector<std::string>>();
    r.independent = j.at("independent").get<std::vector<std::string>>();
    for (const ordered_json& e : j.at("methods")) {
      MethodEval m;
      m.method = e.at("method").get<std::string>();
      m.auroc = e.at("auroc").get<double>();
      m.accuracy = e.at("accuracy").get<double>();
      m.weighted_auroc = e.at("weighted_auroc").get<double>();
      m.weighted_accuracy = e.at("weighted_accuracy").get<double>();
      m.evaluated = e.at("evaluated").get<std::size_t>();
      m.skipped = e.at("skipped").get<std::size_t>();
      m.per_cell_auroc = e.at("per_cell_auroc").get<std::vector<double>>();
      r.methods.push_back(std::move(m));
    }
    r.config = j.at("config");
  } catch (const ordered_json::exception& ex) {
    throw LoadError("bad report in " + path.string() + ": " + ex.what());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Weight-fit artifacts.

struct WeightsArtifact {
  std::vector<std::string> methods;
  std::vector<std::string> cells;
  Matrix a;
  std::vector<double> b;
  double reg = 1.0;
  std::vector<double> w;
  double objective = 0.0;

  bool operator==(const WeightsArtifact&) const = default;
};

// Full-precision JSON; weights feed later scoring runs, so nothing is
// quantized here.
inline void save_weights(const WeightsArtifact& art,
                         const std::filesystem::path& path) {
  detail::require_finite(art.reg, "weights reg");
  detail::require_finite(art.objective, "weights objective");
  for (double v : art.b) detail::require_finite(v, "weights b");
  for (double v : art.w) detail::require_finite(v, "weights w");
  for (const auto& row : art.a) {
    for (double v : row) detail::require_finite(v, "weights matrix");
  }

  ordered_json j;
  j["format_version"] = 1;
  j["methods"] = art.methods;
  j["cells"] = art.cells;
  j["a"] = art.a;
  j["b"] = art.b;
  j["reg"] = art.reg;
  j["w"] = art.w;
  j["objective"] = art.objective;
  detail::write_text_file(path, j.dump(2) + "\n");
}

inline WeightsArtifact load_weights(const std::filesystem::path& path) {
  const ordered_json j = detail::parse_json_file(path);
  WeightsArtifact art;
  try {
    if (j.at("format_version").get<int>() != 1) {
      throw LoadError("unsupported weights version in " + path.string());
    }
    art.methods = j.at("methods").get<std::vector<std::string>>();
    art.cells = j.at("cells").get<std::vector<std::string>>();
    art.a = j.at("a").get<Matrix>();
    art.b = j.at("b").get<std::vector<double>>();
    art.reg = j.at("reg").get<double>();
    art.w = j.at("w").get<std::vector<double>>();
    art.objective = j.at("objective").get<double>();
  } catch (const ordered_json::exception& ex) {
    throw LoadError("bad weights file in " + path.string() + ": " + ex.what());
  }
  return art;
}

// ---------------------------------------------------------------------------
// Network checkpoints.

struct Checkpoint {
  CnnParams params;
  std::uint64_t seed = 0;
};

namespace detail {

// Semantic shape of each parameter segment, conv kernels as
// [k, k, in, out], dense kernels as [in, out], biases as [out].
inline std::vector<std::vector<std::size_t>> segment_shapes(
    const CnnConfig& config) {
  const CnnGeometry g = cnn_geometry(config);
  std::vector<std::vector<std::size_t>> shapes;
  for (std::size_t b = 0; b < 3; ++b) {
    shapes.push_back({3, 3, g.channels[b], g.channels[b + 1]});
    shapes.push_back({g.channels[b + 1]});
  }
  for (std::size_t l = 0; l < 4; ++l) {
    shapes.push_back({g.dense_in[l], g.dense_out[l]});
    shapes.push_back({g.dense_out[l]});
  }
  return shapes;
}

}  // namespace detail

// Versioned JSON checkpoint: config, per-segment shapes, the flat parameter
// vector in declared segment order, and the training seed. Values round-trip
// exactly.
inline void save_checkpoint(const CnnParams& params, std::uint64_t seed,
                            const std::filesystem::path& path) {
  const CnnGeometry g = cnn_geometry(params.config);
  if (params.values.size() != g.total) {
    throw std::invalid_argument("checkpoint: parameter size mismatch");
  }
  for (double v : params.values) detail::require_finite(v, "checkpoint");

  ordered_json j;
  j["format_version"] = 1;
  j["config"]["input"] = params.config.input;
  j["config"]["filters"] = params.config.filters;
  j["config"]["dense"] = params.config.dense;
  j["seed"] = seed;
  j["shapes"] = detail::segment_shapes(params.config);
  j["values"] = params.values;
  detail::write_text_file(path, j.dump() + "\n");
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const ordered_json j = detail::parse_json_file(path);
  Checkpoint ck;
  try {
    if (j.at("format_version").get<int>() != 1) {
      throw LoadError("unsupported checkpoint version in " + path.string());
    }
    ck.params.config.input = j.at("config").at("input").get<std::size_t>();
    ck.params.config.filters =
        j.at("config").at("filters").get<std::array<std::size_t, 3>>();
    ck.params.config.dense =
        j.at("config").at("dense").get<std::array<std::size_t, 3>>();
    ck.seed = j.at("seed").get<std::uint64_t>();
    const auto shapes =
        j.at("shapes").get<std::vector<std::vector<std::size_t>>>();
    if (shapes != detail::segment_shapes(ck.params.config)) {
      throw LoadError("checkpoint shape mismatch in " + path.string());
    }
    ck.params.values = j.at("values").get<std::vector<double>>();
    if (ck.params.values.size() != cnn_geometry(ck.params.config).total) {
      throw LoadError("checkpoint shape mismatch in " + path.string());
    }
  } catch (const ordered_json::exception& ex) {
    throw LoadError("bad checkpoint in " + path.string() + ": " + ex.what());
  }
  return ck;
}

// ---------------------------------------------------------------------------
// Training history CSV.

inline void save_history(const std::vector<EpochStats>& history,
                         const std::filesystem::path& path) {
  std::string csv =
      "epoch,train_loss,train_auroc,train_accuracy,"
      "val_loss,val_auroc,val_accuracy\n";
  for (const EpochStats& e : history) {
    csv += std::to_string(e.epoch);
    for (double v :
         {e.train_loss, e.train_auroc, e.train_accuracy, e.val_loss,
          e.val_auroc, e.val_accuracy}) {
      csv += ',';
      csv += format_double(v, 12);
    }
    csv += '\n';
  }
  detail::write_text_file(path, csv);
}

}  // namespace exchpairs
