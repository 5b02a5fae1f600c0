#include "specex/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "specex/errors.hpp"
#include "specex/features.hpp"

namespace specex {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

ExperimentTable run_policy_grid(std::span<const ClipRef> clips,
                                const ClipLoader& load,
                                const std::vector<SegmentPolicy>& policies,
                                const FrameConfig& cfg, const TrainConfig& tcfg,
                                double train_fraction, double eval_fraction) {
  cfg.validate();
  if (clips.empty()) throw Error("EmptyManifest", "no clips for experiment");
  if (policies.empty()) throw Error("InvalidParams", "no policies for experiment");

  ExperimentTable table;
  table.cells.resize(policies.size());
  std::vector<std::vector<FeatureRow>> rows_per_policy(policies.size());

  for (std::size_t i = 0; i < clips.size(); ++i) {
    const AudioBuffer buf = load(i);
    for (std::size_t p = 0; p < policies.size(); ++p) {
      const auto start = Clock::now();
      const Segment seg = resolve_segment(
          policies[p], static_cast<std::int64_t>(buf.samples.size()),
          buf.sample_rate);
      const FeatureVector fv = extract_feature_vector(buf, seg, cfg);
      table.cells[p].extract_seconds += seconds_since(start);
      rows_per_policy[p].push_back({clips[i].id, fv, clips[i].label});
    }
  }

  for (std::size_t p = 0; p < policies.size(); ++p) {
    table.cells[p].policy = policies[p];
    const FeatureTable ft = to_feature_table(rows_per_policy[p]);
    const auto start = Clock::now();
    const TrainResult result = train(ft, train_fraction, eval_fraction, tcfg);
    table.cells[p].train_seconds = seconds_since(start);
    table.cells[p].accuracy = result.history.back().eval_accuracy;
  }
  return table;
}

ExperimentTable run_table1_analog(std::span<const ClipRef> clips,
                                  const ClipLoader& load, const FrameConfig& cfg,
                                  const TrainConfig& tcfg,
                                  const std::vector<double>& head_durations_s) {
  std::vector<SegmentPolicy> policies;
  for (double d : head_durations_s) policies.push_back(HeadPolicy{d});
  return run_policy_grid(clips, load, policies, cfg, tcfg);
}

ExperimentTable run_table2_analog(std::span<const ClipRef> clips,
                                  const ClipLoader& load, const FrameConfig& cfg,
                                  const TrainConfig& tcfg, double reference_s,
                                  double tail_fraction) {
  const std::vector<SegmentPolicy> policies = {
      HeadPolicy{5.0}, HeadPolicy{20.0}, FullPolicy{},
      TailFractionPolicy{tail_fraction, reference_s}};
  return run_policy_grid(clips, load, policies, cfg, tcfg);
}

std::string experiment_table_csv(const ExperimentTable& table) {
  std::ostringstream out;
  out << "policy,accuracy,train_seconds,extract_seconds\n";
  char buf[192];
  for (const auto& cell : table.cells) {
    std::snprintf(buf, sizeof(buf), "%s,%.4f,%.6f,%.6f",
                  format_policy(cell.policy).c_str(), cell.accuracy,
                  cell.train_seconds, cell.extract_seconds);
    out << buf << '\n';
  }
  return out.str();
}

}  // namespace specex
