#pragma once

#include <cstdint>
#include <vector>

#include "valfit/learn.hpp"
#include "valfit/model.hpp"

namespace valfit {

/// Fixed catalogue of ground-truth models: ids 1-4 have three criteria,
/// ids 5-8 have five, all on [0,1] scales.  Every model mixes at least two
/// marginal shapes (piecewise linear, sigmoid, exponential, polynomials of
/// degree 2, 3 and 15); all parameters are compiled-in constants so results
/// are stable across builds.  Smooth non-polynomial shapes are represented
/// as monotone cubic interpolants on 16 knots.
AdditiveModel model_zoo(int id);

struct ExperimentConfig {
  int modelId = 1;
  std::uint64_t seed = 1;
  int learningSize = 100;  // m*: reference alternatives
  int testSize = 1000;
  FitSpec spec;
};

struct ExperimentResult {
  int modelId = 0;
  std::uint64_t seed = 0;
  int degree = 0;
  int pieces = 0;
  int continuity = 0;
  int learningSize = 0;
  double spearman = 0.0;
  double kendall = 0.0;
  double totalSlack = 0.0;
  ProblemSizes sizes;
  double seconds = 0.0;
  conic::SolveStatus status = conic::SolveStatus::NumericalFailure;
  bool ok = false;  // solve reached optimality and metrics are meaningful
};

/// One cell of the synthetic protocol: draw m* reference alternatives
/// uniformly on the unit cube, rank them with the ground truth, turn the
/// ranking into adjacent pairwise statements, fit, then score a fresh test
/// sample against the truth with both rank metrics.  The generator is
/// seeded with cfg.seed and consumed in a fixed order (alternatives
/// row-major, learning set first, test set second), so a cell's data depends
/// only on (modelId, seed, m*, testSize) and never on the fit spec.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Same protocol with an explicit ground-truth model (modelId is only echoed
/// into the result).
ExperimentResult run_experiment(const AdditiveModel& truth, const ExperimentConfig& cfg);

struct SweepGrid {
  std::vector<int> modelIds;
  std::vector<std::uint64_t> seeds;
  std::vector<int> learningSizes;
  std::vector<FitSpec> specs;
  int testSize = 1000;
};

/// Cross product of the grid, iterated modelId-major, then seed, then m*,
/// then spec.  Cells are independent (each owns its generator), so the
/// result is the same no matter how or where the cells run.
std::vector<ExperimentResult> sweep(const SweepGrid& grid);

/// Mean/stddev of both metrics grouped by (modelId, spec shape, m*); a
/// pooled row over all models (modelId = 0) is appended per shape.
struct AggregateRow {
  int modelId = 0;  // 0 = pooled over models
  int degree = 0;
  int pieces = 0;
  int continuity = 0;
  int learningSize = 0;
  int cells = 0;
  double meanKendall = 0.0;
  double sdKendall = 0.0;
  double meanSpearman = 0.0;
  double sdSpearman = 0.0;
};

std::vector<AggregateRow> aggregate(const std::vector<ExperimentResult>& rows);

}  // namespace valfit
