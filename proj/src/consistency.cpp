#include "specex/consistency.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "specex/errors.hpp"

namespace specex {

std::array<double, FeatureVector::kSize> relative_deviation(
    const FeatureVector& a, const FeatureVector& baseline) {
  const auto av = a.values();
  const auto bv = baseline.values();
  std::array<double, FeatureVector::kSize> dev{};
  for (std::size_t i = 0; i < dev.size(); ++i)
    dev[i] = std::abs(av[i] - bv[i]) / std::max(std::abs(bv[i]), kDeviationFloor);
  return dev;
}

ConsistencyReport consistency_report(const AudioBuffer& buf,
                                     const std::string& clip_id,
                                     const std::vector<SegmentPolicy>& policies,
                                     const SegmentPolicy& baseline,
                                     const FrameConfig& cfg) {
  ConsistencyReport report;
  report.clip_id = clip_id;
  report.baseline_policy = baseline;

  const auto clip_len = static_cast<std::int64_t>(buf.samples.size());
  const Segment base_seg = resolve_segment(baseline, clip_len, buf.sample_rate);
  report.baseline_value = extract_feature_vector(buf, base_seg, cfg);

  for (const auto& policy : policies) {
    ConsistencyRow row;
    row.policy = policy;
    try {
      const Segment seg = resolve_segment(policy, clip_len, buf.sample_rate);
      row.value = extract_feature_vector(buf, seg, cfg);
      row.deviation = relative_deviation(row.value, report.baseline_value);
      row.max_deviation =
          *std::max_element(row.deviation.begin(), row.deviation.end());
    } catch (const Error& e) {
      row.failed = true;
      row.error_kind = e.kind();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

double structuredness_score(const AudioBuffer& buf,
                            const std::vector<double>& probe_durations_s,
                            const FrameConfig& cfg) {
  if (probe_durations_s.empty())
    throw Error("InvalidParams", "need at least one probe duration");
  std::vector<SegmentPolicy> probes;
  probes.reserve(probe_durations_s.size());
  for (double d : probe_durations_s) probes.push_back(HeadPolicy{d});

  const auto report =
      consistency_report(buf, "", probes, FullPolicy{}, cfg);
  double score = 0.0;
  for (const auto& row : report.rows) {
    if (row.failed)
      throw Error(row.error_kind, "probe " + format_policy(row.policy) +
                                      " failed on this clip");
    score = std::max(score, row.max_deviation);
  }
  return score;
}

void append_plot_data(std::ostream& out, const ConsistencyReport& report,
                      bool with_header) {
  if (with_header)
    out << "clip_id,policy,feature,baseline_value,value,deviation\n";
  const auto base = report.baseline_value.values();
  char buf[256];
  for (const auto& row : report.rows) {
    if (row.failed) continue;
    const auto vals = row.value.values();
    for (std::size_t i = 0; i < FeatureVector::kSize; ++i) {
      std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g", base[i], vals[i],
                    row.deviation[i]);
      out << report.clip_id << ',' << format_policy(row.policy) << ','
          << FeatureVector::names()[i] << ',' << buf << '\n';
    }
  }
}

std::string emit_plot_data(const ConsistencyReport& report) {
  std::ostringstream out;
  append_plot_data(out, report, true);
  return out.str();
}

}  // namespace specex
