#pragma once

#include <span>
#include <string>
#include <vector>

#include "specex/dsp.hpp"
#include "specex/mlp.hpp"
#include "specex/pipeline.hpp"
#include "specex/segmentation.hpp"

namespace specex {

struct ExperimentCell {
  SegmentPolicy policy;
  double accuracy = 0.0;
  double train_seconds = 0.0;
  double extract_seconds = 0.0;
};

struct ExperimentTable {
  std::vector<ExperimentCell> cells;
};

// One accuracy experiment per policy: extract the corpus under the policy,
// train the classifier on the resulting table, record the final eval
// accuracy. Clips stream through one at a time; any extraction failure
// aborts the grid. Deterministic given the train config's seed.
ExperimentTable run_policy_grid(std::span<const ClipRef> clips,
                                const ClipLoader& load,
                                const std::vector<SegmentPolicy>& policies,
                                const FrameConfig& cfg, const TrainConfig& tcfg,
                                double train_fraction = 0.8,
                                double eval_fraction = 0.2);

// Accuracy-vs-duration grid over head trims of a structured corpus
// (defaults: 3, 5, 10, 30 seconds).
ExperimentTable run_table1_analog(std::span<const ClipRef> clips,
                                  const ClipLoader& load, const FrameConfig& cfg,
                                  const TrainConfig& tcfg,
                                  const std::vector<double>& head_durations_s = {
                                      3.0, 5.0, 10.0, 30.0});

// Head/full/tail grid over an unstructured corpus; the tail slot is the
// trailing `tail_fraction` of `reference_s` (the corpus global average).
ExperimentTable run_table2_analog(std::span<const ClipRef> clips,
                                  const ClipLoader& load, const FrameConfig& cfg,
                                  const TrainConfig& tcfg, double reference_s,
                                  double tail_fraction = 0.10);

// CSV: policy,accuracy,train_seconds,extract_seconds
std::string experiment_table_csv(const ExperimentTable& table);

}  // namespace specex
