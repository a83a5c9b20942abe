// Command-line front end for the exchpairs pipeline:
//   generate -> noisify -> evaluate/screen -> fit-weights -> train -> score
//   -> report
// Exit codes: 0 success, 1 runtime failure, 2 usage error. Diagnostics go to
// stderr; with --quiet, stdout carries only data.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <exchpairs/data_io.hpp>
#include <exchpairs/evaluate.hpp>
#include <exchpairs/generator.hpp>
#include <exchpairs/methods.hpp>
#include <exchpairs/metrics.hpp>
#include <exchpairs/synthnn.hpp>
#include <exchpairs/weights.hpp>

namespace fs = std::filesystem;
using namespace exchpairs;

namespace {

bool g_quiet = false;

// Progress/summary channel; silenced by --quiet so stdout stays data-only.
void say(const std::string& line) {
  if (!g_quiet) std::cout << line << "\n";
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<CellSpec> parse_cells(const std::string& arg) {
  const std::vector<CellSpec> grid = all_cells();
  if (arg == "all") return grid;
  std::vector<CellSpec> chosen;
  for (const std::string& name : split_csv(arg)) {
    const auto hit = std::find_if(
        grid.begin(), grid.end(),
        [&](const CellSpec& c) { return c.name() == name; });
    if (hit == grid.end()) {
      throw std::invalid_argument("unknown cell: " + name);
    }
    chosen.push_back(*hit);
  }
  if (chosen.empty()) throw std::invalid_argument("no cells selected");
  return chosen;
}

std::vector<Method> parse_methods(const std::string& arg) {
  std::vector<Method> methods;
  for (const std::string& name : split_csv(arg)) {
    methods.push_back(method_from_string(name));
  }
  if (methods.empty()) throw std::invalid_argument("no methods selected");
  return methods;
}

bool is_benchmark_dir(const fs::path& dir) {
  return fs::exists(dir / "pairmeta.txt");
}

bool is_dataset_dir(const fs::path& dir) {
  return fs::exists(dir / "manifest.json");
}

std::vector<EvalItem> load_items(const fs::path& dir,
                                 std::vector<std::string>* cells) {
  if (is_dataset_dir(dir)) {
    const Dataset ds = load_dataset(dir);
    if (cells) {
      for (const CellSpec& c : ds.cells) cells->push_back(c.name());
    }
    return items_from_dataset(ds);
  }
  if (is_benchmark_dir(dir)) {
    return items_from_benchmark(load_benchmark(dir));
  }
  throw LoadError("neither manifest.json nor pairmeta.txt in " + dir.string());
}

void write_or_print(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    detail::write_text_file(out_path, text);
  }
}

// ---------------------------------------------------------------------------
// generate / noisify

struct GenerateArgs {
  std::string out;
  std::string cells = "all";
  std::size_t per_cell = 2;
  std::uint64_t seed = 0;
  double sigma_x = 0.01;
  double sigma_y = 0.01;
  std::size_t n_samples = 500;
  std::string size_from;
};

int run_generate(const GenerateArgs& a) {
  GenConfig base;
  base.sigma_x = a.sigma_x;
  base.sigma_y = a.sigma_y;
  base.n_samples = a.n_samples;

  SizeModel model;
  const SizeModel* model_ptr = nullptr;
  if (!a.size_from.empty()) {
    std::vector<long> sizes;
    for (const BenchmarkPair& p : load_benchmark(a.size_from)) {
      if (!p.skipped) sizes.push_back(static_cast<long>(p.xs.size()));
    }
    model = fit_size_model(sizes);
    model_ptr = &model;
  }

  const Dataset ds =
      assemble_dataset(parse_cells(a.cells), a.per_cell, base, a.seed,
                       model_ptr);
  save_dataset(ds, a.out);
  say("wrote " + std::to_string(ds.examples.size()) + " examples to " + a.out);
  return 0;
}

struct NoisifyArgs {
  std::string in;
  std::string out;
  double noise_add = 0.0;
  double noise_mult = 0.0;
  std::uint64_t seed = 0;
};

int run_noisify(const NoisifyArgs& a) {
  Dataset ds = load_dataset(a.in);
  const RandomStream root(a.seed);
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    RandomStream rng = root.child(i);
    ds.examples[i].example =
        noisify(ds.examples[i].example, a.noise_add, a.noise_mult, rng);
  }
  ds.noise_add = a.noise_add;
  ds.noise_mult = a.noise_mult;
  ds.noise_seed = a.seed;
  save_dataset(ds, a.out);
  say("noisified " + std::to_string(ds.examples.size()) + " examples into " +
      a.out);
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate / screen

struct EvaluateArgs {
  std::string in;
  std::string methods = "igci,reci,anm_hoeffding";
  double threshold = kIndependenceThreshold;
  bool screen = false;
  std::string out;
};

int run_evaluate(const EvaluateArgs& a) {
  const std::vector<Method> methods = parse_methods(a.methods);

  EvalReport report;
  report.source = a.in;
  report.threshold = a.threshold;
  const std::vector<EvalItem> items = load_items(a.in, &report.cells);
  if (a.screen) {
    for (const ScreenEntry& e : screen_items(items, a.threshold)) {
      if (e.independent) report.independent.push_back(e.id);
    }
  }
  for (Method m : methods) {
    report.methods.push_back(
        evaluate_method(m, items, report.cells.size()).eval);
  }
  report.config["command"] = "evaluate";
  report.config["in"] = a.in;
  report.config["methods"] = a.methods;
  report.config["threshold"] = a.threshold;
  report.config["screen"] = a.screen;

  if (a.out.empty()) {
    std::cout << report_to_json(report).dump(2) << "\n";
  } else {
    save_report(report, a.out);
    say("wrote " + a.out + " (" + std::to_string(report.methods.size()) +
        " methods, " + std::to_string(items.size()) + " pairs)");
  }
  return 0;
}

struct ScreenArgs {
  std::string in;
  double threshold = kIndependenceThreshold;
  std::string out;
};

int run_screen(const ScreenArgs& a) {
  const std::vector<EvalItem> items = load_items(a.in, nullptr);
  const std::vector<ScreenEntry> entries = screen_items(items, a.threshold);

  ordered_json j;
  j["format_version"] = 1;
  j["source"] = a.in;
  j["threshold"] = a.threshold;
  j["config"] = {{"command", "screen"}, {"in", a.in},
                 {"threshold", a.threshold}};
  j["pairs"] = ordered_json::array();
  std::size_t flagged = 0;
  for (const ScreenEntry& e : entries) {
    ordered_json row;
    row["id"] = e.id;
    row["d"] = round_sig(e.d);
    row["independent"] = e.independent;
    j["pairs"].push_back(std::move(row));
    flagged += e.independent ? 1 : 0;
  }
  write_or_print(j.dump(2) + "\n", a.out);
  if (!a.out.empty()) {
    say("screened " + std::to_string(entries.size()) + " pairs, flagged " +
        std::to_string(flagged));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// fit-weights

struct FitWeightsArgs {
  std::string report;
  std::string reference;
  double reg = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_fit_weights(const FitWeightsArgs& a) {
  const EvalReport synth = load_report(a.report);
  const EvalReport ref = load_report(a.reference);
  if (synth.cells.empty()) {
    throw std::invalid_argument("report has no per-cell columns: " + a.report);
  }

  WeightsArtifact art;
  art.cells = synth.cells;
  art.reg = a.reg;
  for (const MethodEval& m : synth.methods) {
    const auto hit = std::find_if(
        ref.methods.begin(), ref.methods.end(),
        [&](const MethodEval& r) { return r.method == m.method; });
    if (hit == ref.methods.end()) continue;
    if (m.per_cell_auroc.size() != synth.cells.size()) {
      throw LoadError("per-cell column width mismatch in " + a.report);
    }
    art.methods.push_back(m.method);
    art.a.push_back(m.per_cell_auroc);
    art.b.push_back(hit->weighted_auroc);
  }
  if (art.methods.empty()) {
    throw std::invalid_argument("no methods shared by " + a.report + " and " +
                                a.reference);
  }

  WeightProblem problem{art.a, art.b, art.reg};
  const WeightFit fit = fit_weights(problem, 1e-12, 10000, a.seed);
  art.w = fit.w;
  art.objective = fit.objective;
  save_weights(art, a.out);
  say("fit " + std::to_string(art.w.size()) + " weights, objective " +
      format_double(fit.objective, 6));
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string in;
  std::string out;
  std::string scale = "full";
  std::size_t epochs = 10;
  std::size_t batch = 16;
  double alpha = 1e-4;
  double lambda = 0.01;
  double blur_sigma = 0.5;
  double val_fraction = 0.2;
  std::uint64_t seed = 0;
};

int run_train(const TrainArgs& a) {
  TrainConfig tc;
  tc.scale = scale_from_string(a.scale);
  tc.epochs = a.epochs;
  tc.batch = a.batch;
  tc.alpha = a.alpha;
  tc.lambda = a.lambda;
  tc.blur_sigma = a.blur_sigma;
  tc.val_fraction = a.val_fraction;
  tc.seed = a.seed;
  tc.validate();

  const Dataset ds = load_dataset(a.in);
  const CnnConfig net = config_for_scale(tc.scale);
  std::vector<LabeledImage> data(ds.examples.size());
  parallel_for(ds.examples.size(), [&](std::size_t i) {
    const Example& ex = ds.examples[i].example;
    data[i].image =
        rasterize(unit_scale(ex.xs), unit_scale(ex.ys), net.input);
    data[i].label = ex.label == Direction::x_to_y ? 1.0 : 0.0;
  });

  const TrainResult result = train(data, tc);
  fs::create_directories(a.out);
  save_checkpoint(result.params, tc.seed, fs::path(a.out) / "checkpoint.json");
  save_history(result.history, fs::path(a.out) / "history.csv");

  ordered_json cfg;
  cfg["command"] = "train";
  cfg["in"] = a.in;
  cfg["scale"] = a.scale;
  cfg["epochs"] = a.epochs;
  cfg["batch"] = a.batch;
  cfg["alpha"] = a.alpha;
  cfg["lambda"] = a.lambda;
  cfg["blur_sigma"] = a.blur_sigma;
  cfg["val_fraction"] = a.val_fraction;
  cfg["seed"] = a.seed;
  detail::write_text_file(fs::path(a.out) / "train_config.json",
                          cfg.dump(2) + "\n");

  const EpochStats& last = result.history.back();
  say("trained " + std::to_string(a.epochs) + " epochs, val auroc " +
      format_double(last.val_auroc, 4) + ", val loss " +
      format_double(last.val_loss, 4));
  return 0;
}

// ---------------------------------------------------------------------------
// score

struct ScoreArgs {
  std::string in;
  std::string checkpoint;
  std::string out;
};

int run_score(const ScoreArgs& a) {
  const Checkpoint ck = load_checkpoint(a.checkpoint);
  const std::vector<EvalItem> items = load_items(a.in, nullptr);

  struct Row {
    std::string id;
    double s = 0.0;
    bool ok = false;
  };
  std::vector<Row> rows(items.size());
  parallel_for(items.size(), [&](std::size_t i) {
    rows[i].id = items[i].id;
    try {
      rows[i].s = asymmetry_score(ck.params, items[i].xs, items[i].ys);
      rows[i].ok = true;
    } catch (const InsufficientDataError&) {
    } catch (const DegenerateInputError&) {
    }
  });

  std::string csv = "id,score,decision\n";
  for (const Row& r : rows) {
    csv += r.id;
    csv += ',';
    if (r.ok) {
      csv += format_double(r.s, 12);
      csv += ',';
      csv += r.s < 0.0 ? "YtoX" : "XtoY";
    } else {
      csv += ",insufficient_data";
    }
    csv += '\n';
  }
  write_or_print(csv, a.out);
  if (!a.out.empty()) {
    say("scored " + std::to_string(items.size()) + " pairs into " + a.out);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::string in;
  std::string scores;
  std::string weights;
  std::string out;
  bool plots = false;
};

std::string svg_bar_chart(const std::string& title,
                          const std::vector<std::string>& labels,
                          const std::vector<double>& values) {
  const int bar_h = 24, gap = 8, left = 150, top = 40;
  const int width = 640;
  const int height =
      top + static_cast<int>(labels.size()) * (bar_h + gap) + 20;
  const int span = width - left - 70;

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"" << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" "
    << "font-size=\"16\">" << title << "</text>\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = top + static_cast<int>(i) * (bar_h + gap);
    const double v = std::clamp(values[i], 0.0, 1.0);
    const int w = static_cast<int>(v * span);
    s << "<text x=\"" << left - 8 << "\" y=\"" << y + bar_h - 7
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
      << "font-size=\"13\">" << labels[i] << "</text>\n";
    s << "<rect x=\"" << left << "\" y=\"" << y << "\" width=\"" << w
      << "\" height=\"" << bar_h << "\" fill=\"#4878a8\"/>\n";
    s << "<text x=\"" << left + w + 6 << "\" y=\"" << y + bar_h - 7
      << "\" font-family=\"sans-serif\" font-size=\"13\">"
      << format_double(values[i], 4) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string svg_histogram(const std::string& title,
                          const std::vector<double>& values, double lo,
                          double hi, int bins) {
  std::vector<int> counts(bins, 0);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    b = std::clamp(b, 0, bins - 1);
    counts[b] += 1;
  }
  const int peak = std::max(1, *std::max_element(counts.begin(), counts.end()));

  const int width = 640, height = 360, left = 50, bottom = 320, top = 40;
  const double bw = static_cast<double>(width - left - 20) / bins;
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"" << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" "
    << "font-size=\"16\">" << title << "</text>\n";
  for (int b = 0; b < bins; ++b) {
    const double frac = static_cast<double>(counts[b]) / peak;
    const int h = static_cast<int>(frac * (bottom - top));
    s << "<rect x=\"" << left + b * bw << "\" y=\"" << bottom - h
      << "\" width=\"" << bw - 1 << "\" height=\"" << h
      << "\" fill=\"#4878a8\"/>\n";
  }
  s << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\""
    << width - 20 << "\" y2=\"" << bottom << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << left << "\" y=\"" << bottom + 18
    << "\" font-family=\"sans-serif\" font-size=\"12\">"
    << format_double(lo, 3) << "</text>\n";
  s << "<text x=\"" << width - 20 << "\" y=\"" << bottom + 18
    << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
    << format_double(hi, 3) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::vector<double> read_score_column(const fs::path& path) {
  std::istringstream in(detail::read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("id,score", 0) != 0) {
    throw LoadError("not a scores csv: " + path.string());
  }
  std::vector<double> out;
  while (std::getline(in, line)) {
    const std::size_t a = line.find(',');
    if (a == std::string::npos) continue;
    const std::size_t b = line.find(',', a + 1);
    const std::string field = line.substr(a + 1, b - a - 1);
    double v = 0.0;
    if (detail::parse_double_strict(field, &v)) out.push_back(v);
  }
  return out;
}

int run_report(const ReportArgs& a) {
  const EvalReport report = load_report(a.in);
  fs::create_directories(a.out);

  std::ostringstream text;
  text << "source: " << report.source << "\n";
  text << "threshold: " << format_double(report.threshold, 6) << "\n";
  text << "flagged independent: " << report.independent.size() << "\n\n";
  text << "method            auroc  accuracy  w_auroc  w_accuracy  "
          "evaluated  skipped\n";
  for (const MethodEval& m : report.methods) {
    char row[160];
    std::snprintf(row, sizeof(row),
                  "%-16s %6.3f  %8.3f  %7.3f  %10.3f  %9zu  %7zu\n",
                  m.method.c_str(), m.auroc, m.accuracy, m.weighted_auroc,
                  m.weighted_accuracy, m.evaluated, m.skipped);
    text << row;
  }

  if (!a.weights.empty()) {
    const WeightsArtifact art = load_weights(a.weights);
    text << "\nweighted cells (" << art.cells.size() << "), reg "
         << format_double(art.reg, 6) << ", objective "
         << format_double(art.objective, 6) << "\n";
    const std::vector<double> combined = weighted_performance(art.a, art.w);
    const DistanceReport dist = distance_report(combined, art.b);
    text << "method            weighted  reference\n";
    for (std::size_t i = 0; i < art.methods.size(); ++i) {
      char row[120];
      std::snprintf(row, sizeof(row), "%-16s %9.3f  %9.3f\n",
                    art.methods[i].c_str(), combined[i], art.b[i]);
      text << row;
    }
    text << "l1 distance: " << format_double(dist.l1, 6) << "\n";
    text << "l2 distance: " << format_double(dist.l2, 6) << "\n";
  }
  detail::write_text_file(fs::path(a.out) / "summary.txt", text.str());

  if (a.plots) {
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const MethodEval& m : report.methods) {
      labels.push_back(m.method);
      values.push_back(m.auroc);
    }
    detail::write_text_file(fs::path(a.out) / "auroc.svg",
                            svg_bar_chart("AUROC by method", labels, values));
    if (!a.scores.empty()) {
      const std::vector<double> s = read_score_column(a.scores);
      detail::write_text_file(
          fs::path(a.out) / "scores.svg",
          svg_histogram("Asymmetry score distribution", s, -1.0, 1.0, 20));
    }
  }
  say("wrote report artifacts to " + a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exchangeable cause-effect pair pipeline"};
  app.require_subcommand(1);
  app.add_flag("--quiet", g_quiet, "stdout carries only data");

  GenerateArgs gen;
  CLI::App* c_gen = app.add_subcommand("generate", "generate a dataset");
  c_gen->add_option("--out", gen.out, "output directory")->required();
  c_gen->add_option("--cells", gen.cells, "all or comma-separated cell names");
  c_gen->add_option("--per-cell", gen.per_cell, "examples per cell (even)");
  c_gen->add_option("--seed", gen.seed, "RNG seed");
  c_gen->add_option("--sigma-x", gen.sigma_x, "cause noise std");
  c_gen->add_option("--sigma-y", gen.sigma_y, "effect noise std");
  c_gen->add_option("--n-samples", gen.n_samples, "samples per example");
  c_gen->add_option("--size-from", gen.size_from,
                    "benchmark dir whose sizes seed the sample-size model");

  NoisifyArgs noi;
  CLI::App* c_noi = app.add_subcommand("noisify", "add observation noise");
  c_noi->add_option("--in", noi.in, "input dataset")->required();
  c_noi->add_option("--out", noi.out, "output dataset")->required();
  c_noi->add_option("--noise-add", noi.noise_add, "additive noise std");
  c_noi->add_option("--noise-mult", noi.noise_mult, "multiplicative noise std");
  c_noi->add_option("--seed", noi.seed, "RNG seed");

  EvaluateArgs ev;
  CLI::App* c_ev = app.add_subcommand("evaluate", "score methods on pairs");
  c_ev->add_option("--in", ev.in, "dataset or benchmark directory")
      ->required();
  c_ev->add_option("--methods", ev.methods, "comma-separated method names");
  c_ev->add_option("--threshold", ev.threshold, "independence threshold");
  c_ev->add_flag("--screen", ev.screen, "list independence-flagged pairs");
  c_ev->add_option("--out", ev.out, "report path (stdout if omitted)");

  ScreenArgs sc;
  CLI::App* c_sc = app.add_subcommand("screen", "independence screening");
  c_sc->add_option("--in", sc.in, "dataset or benchmark directory")
      ->required();
  c_sc->add_option("--threshold", sc.threshold, "independence threshold");
  c_sc->add_option("--out", sc.out, "output path (stdout if omitted)");

  FitWeightsArgs fw;
  CLI::App* c_fw = app.add_subcommand("fit-weights", "fit cell weights");
  c_fw->add_option("--report", fw.report, "synthetic report with cells")
      ->required();
  c_fw->add_option("--reference", fw.reference, "reference report")
      ->required();
  c_fw->add_option("--reg", fw.reg, "regularization strength");
  c_fw->add_option("--seed", fw.seed, "restart seed");
  c_fw->add_option("--out", fw.out, "weights path")->required();

  TrainArgs tr;
  CLI::App* c_tr = app.add_subcommand("train", "train the classifier");
  c_tr->add_option("--in", tr.in, "training dataset")->required();
  c_tr->add_option("--out", tr.out, "output directory")->required();
  c_tr->add_option("--scale", tr.scale, "full or desk")
      ->check(CLI::IsMember({"full", "desk"}));
  c_tr->add_option("--epochs", tr.epochs, "training epochs");
  c_tr->add_option("--batch", tr.batch, "batch size");
  c_tr->add_option("--alpha", tr.alpha, "Adam learning rate");
  c_tr->add_option("--lambda", tr.lambda, "kernel L2 penalty");
  c_tr->add_option("--blur-sigma", tr.blur_sigma, "training blur sigma");
  c_tr->add_option("--val-fraction", tr.val_fraction, "validation fraction");
  c_tr->add_option("--seed", tr.seed, "RNG seed");

  ScoreArgs so;
  CLI::App* c_so = app.add_subcommand("score", "asymmetry-score pairs");
  c_so->add_option("--in", so.in, "dataset or benchmark directory")
      ->required();
  c_so->add_option("--checkpoint", so.checkpoint, "trained checkpoint")
      ->required();
  c_so->add_option("--out", so.out, "scores path (stdout if omitted)");

  ReportArgs re;
  CLI::App* c_re = app.add_subcommand("report", "render report artifacts");
  c_re->add_option("--in", re.in, "report json")->required();
  c_re->add_option("--scores", re.scores, "scores csv for distributions");
  c_re->add_option("--weights", re.weights, "weights json for comparisons");
  c_re->add_option("--out", re.out, "output directory")->required();
  c_re->add_flag("--plots", re.plots, "emit static svg images");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_gen->parsed()) return run_generate(gen);
    if (c_noi->parsed()) return run_noisify(noi);
    if (c_ev->parsed()) return run_evaluate(ev);
    if (c_sc->parsed()) return run_screen(sc);
    if (c_fw->parsed()) return run_fit_weights(fw);
    if (c_tr->parsed()) return run_train(tr);
    if (c_so->parsed()) return run_score(so);
    if (c_re->parsed()) return run_report(re);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
