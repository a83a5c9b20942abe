#pragma once

#include <cstddef>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "exchpairs/data_io.hpp"
#include "exchpairs/generator.hpp"
#include "exchpairs/methods.hpp"
#include "exchpairs/metrics.hpp"
#include "exchpairs/parallel.hpp"

namespace exchpairs {

// One scorable pair, whichever source it came from.
struct EvalItem {
  std::string id;
  std::vector<double> xs;
  std::vector<double> ys;
  Direction label = Direction::x_to_y;
  double weight = 1.0;
  std::size_t cell = kNoCell;

  static constexpr std::size_t kNoCell = std::numeric_limits<std::size_t>::max();
};

inline std::vector<EvalItem> items_from_dataset(const Dataset& ds) {
  std::vector<EvalItem> items;
  items.reserve(ds.examples.size());
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    const DatasetExample& de = ds.examples[i];
    char id[16];
    std::snprintf(id, sizeof(id), "ex%05zu", i);
    items.push_back(EvalItem{id, de.example.xs, de.example.ys,
                             de.example.label, de.example.weight, de.cell});
  }
  return items;
}

// Benchmark pairs all store the cause in xs, so a ranking metric needs both
// orientations: every second non-skipped pair (by sorted id) is swapped and
// labeled YtoX. Deterministic, exactly balanced up to parity.
inline std::vector<EvalItem> items_from_benchmark(
    const std::vector<BenchmarkPair>& pairs) {
  std::vector<EvalItem> items;
  std::size_t k = 0;
  for (const BenchmarkPair& p : pairs) {
    if (p.skipped) continue;
    EvalItem it{p.id, p.xs, p.ys, Direction::x_to_y, p.weight,
                EvalItem::kNoCell};
    if (k % 2 == 1) {
      std::swap(it.xs, it.ys);
      it.label = Direction::y_to_x;
    }
    ++k;
    items.push_back(std::move(it));
  }
  return items;
}

struct MethodRun {
  MethodEval eval;
  std::vector<DirectionScore> scores;  // aligned with items
  std::vector<char> scored;            // 0 where the method refused the pair
};

// Scores every item with one method and aggregates ranking metrics. Items the
// method cannot handle count as skipped. Cells that lose a class to skips
// report a neutral 0.5 so reports stay NaN-free.
inline MethodRun evaluate_method(Method method,
                                 const std::vector<EvalItem>& items,
                                 std::size_t n_cells) {
  MethodRun run;
  run.eval.method = to_string(method);
  run.scores.resize(items.size());
  run.scored.assign(items.size(), 0);

  parallel_for(items.size(), [&](std::size_t i) {
    try {
      run.scores[i] = score_pair(method, items[i].xs, items[i].ys);
      run.scored[i] = 1;
    } catch (const InsufficientDataError&) {
    } catch (const DegenerateInputError&) {
    }
  });

  std::vector<LabeledScore> plain, weighted;
  std::vector<DecisionRecord> acc, wacc;
  std::vector<std::vector<LabeledScore>> by_cell(n_cells);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!run.scored[i]) continue;
    const double s = run.scores[i].score;
    plain.push_back({s, items[i].label, 1.0});
    weighted.push_back({s, items[i].label, items[i].weight});
    acc.push_back({run.scores[i].decision, items[i].label, 1.0});
    wacc.push_back({run.scores[i].decision, items[i].label, items[i].weight});
    if (items[i].cell < n_cells) {
      by_cell[items[i].cell].push_back({s, items[i].label, 1.0});
    }
  }

  run.eval.evaluated = plain.size();
  run.eval.skipped = items.size() - plain.size();
  run.eval.auroc = auroc(plain);
  run.eval.weighted_auroc = auroc(weighted);
  run.eval.accuracy = accuracy(acc);
  run.eval.weighted_accuracy = accuracy(wacc);
  run.eval.per_cell_auroc.resize(n_cells);
  for (std::size_t c = 0; c < n_cells; ++c) {
    try {
      run.eval.per_cell_auroc[c] = auroc(by_cell[c]);
    } catch (const UndefinedMetricError&) {
      run.eval.per_cell_auroc[c] = 0.5;
    }
  }
  return run;
}

struct ScreenEntry {
  std::string id;
  double d = 0.0;
  bool independent = false;
};

inline std::vector<ScreenEntry> screen_items(const std::vector<EvalItem>& items,
                                             double threshold) {
  std::vector<ScreenEntry> out(items.size());
  parallel_for(items.size(), [&](std::size_t i) {
    try {
      const double d = hoeffding_d(items[i].xs, items[i].ys);
      out[i] = ScreenEntry{items[i].id, d, independence_flag(d, threshold)};
    } catch (const InsufficientDataError&) {
      // Too few points to assert independence; keep the pair, unflagged.
      out[i] = ScreenEntry{items[i].id, 0.0, false};
    }
  });
  return out;
}

}  // namespace exchpairs
