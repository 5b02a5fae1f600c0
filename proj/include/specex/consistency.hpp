#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "specex/audio.hpp"
#include "specex/features.hpp"
#include "specex/segmentation.hpp"

namespace specex {

// Absolute floor for the per-feature relative deviation denominator.
inline constexpr double kDeviationFloor = 1e-6;

// Default threshold below which a clip counts as structured.
inline constexpr double kStructuredTau = 0.05;

// Per feature: |a_i - b_i| / max(|b_i|, floor); b is the baseline.
std::array<double, FeatureVector::kSize> relative_deviation(
    const FeatureVector& a, const FeatureVector& baseline);

struct ConsistencyRow {
  SegmentPolicy policy;
  bool failed = false;
  std::string error_kind;  // set when failed
  FeatureVector value;
  std::array<double, FeatureVector::kSize> deviation{};
  double max_deviation = 0.0;
};

struct ConsistencyReport {
  std::string clip_id;
  SegmentPolicy baseline_policy;
  FeatureVector baseline_value;
  std::vector<ConsistencyRow> rows;  // one per requested policy, in order
};

// Extracts the baseline once, then one row per policy. A policy that fails to
// resolve or extract produces a failed row carrying the error kind; baseline
// failure propagates.
ConsistencyReport consistency_report(const AudioBuffer& buf,
                                     const std::string& clip_id,
                                     const std::vector<SegmentPolicy>& policies,
                                     const SegmentPolicy& baseline,
                                     const FrameConfig& cfg);

// Max over Head(d) probes of the max feature deviation against the full clip.
// Clips scoring below tau are the synthetic analog of the structured dataset.
double structuredness_score(const AudioBuffer& buf,
                            const std::vector<double>& probe_durations_s,
                            const FrameConfig& cfg);

// Plot-data CSV: clip_id,policy,feature,baseline_value,value,deviation with
// one row per (policy, feature); failed rows are omitted (the caller records
// them separately). Values carry 9 significant digits.
std::string emit_plot_data(const ConsistencyReport& report);
void append_plot_data(std::ostream& out, const ConsistencyReport& report,
                      bool with_header);

}  // namespace specex
