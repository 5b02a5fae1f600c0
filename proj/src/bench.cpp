#include "specex/bench.hpp"

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

BenchReport run_bench(std::span<const ClipRef> clips, const ClipLoader& load,
                      std::vector<SegmentPolicy> policies, const FrameConfig& cfg) {
  cfg.validate();
  if (clips.empty()) throw Error("EmptyManifest", "no clips to benchmark");

  bool have_full = false;
  for (const auto& p : policies)
    if (std::holds_alternative<FullPolicy>(p)) have_full = true;
  if (!have_full) policies.insert(policies.begin(), FullPolicy{});

  BenchReport report;
  report.rows.resize(policies.size());
  for (std::size_t p = 0; p < policies.size(); ++p) {
    report.rows[p].policy = policies[p];
    report.rows[p].clips = clips.size();
  }

  // Clip-major loop keeps one decoded clip in memory at a time; only the
  // extraction itself is inside the timed region.
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const auto decode_start = Clock::now();
    const AudioBuffer buf = load(i);
    report.decode_seconds += seconds_since(decode_start);

    for (std::size_t p = 0; p < policies.size(); ++p) {
      const Segment seg = resolve_segment(
          policies[p], static_cast<std::int64_t>(buf.samples.size()),
          buf.sample_rate);
      const auto start = Clock::now();
      volatile double sink = extract_feature_vector(buf, seg, cfg).rmse;
      report.rows[p].total_seconds += seconds_since(start);
      report.rows[p].processed_samples += seg.length();
      (void)sink;
    }
  }

  double full_seconds = 0.0;
  std::int64_t full_samples = 0;
  for (const auto& row : report.rows) {
    if (std::holds_alternative<FullPolicy>(row.policy)) {
      full_seconds = row.total_seconds;
      full_samples = row.processed_samples;
    }
  }
  for (auto& row : report.rows) {
    row.mean_seconds_per_clip = row.total_seconds / static_cast<double>(row.clips);
    row.speedup_vs_full =
        row.total_seconds > 0.0 ? full_seconds / row.total_seconds : 0.0;
    row.processed_sample_ratio =
        full_samples > 0 ? static_cast<double>(row.processed_samples) /
                               static_cast<double>(full_samples)
                         : 0.0;
  }
  return report;
}

std::string format_bench_table(const BenchReport& report) {
  std::ostringstream out;
  char buf[256];
  out << "policy,clips,total_seconds,mean_seconds_per_clip,speedup_vs_full,"
         "processed_sample_ratio\n";
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%zu,%.6f,%.6f,%.3f,%.9g",
                  format_policy(row.policy).c_str(), row.clips, row.total_seconds,
                  row.mean_seconds_per_clip, row.speedup_vs_full,
                  row.processed_sample_ratio);
    out << buf << '\n';
  }
  std::snprintf(buf, sizeof(buf), "decode_seconds,%.6f", report.decode_seconds);
  out << buf << '\n';
  return out.str();
}

}  // namespace specex
