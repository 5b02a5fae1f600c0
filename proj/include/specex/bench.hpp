#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "specex/dsp.hpp"
#include "specex/pipeline.hpp"
#include "specex/segmentation.hpp"

namespace specex {

struct BenchRow {
  SegmentPolicy policy;
  double total_seconds = 0.0;
  std::size_t clips = 0;
  double mean_seconds_per_clip = 0.0;
  double speedup_vs_full = 0.0;
  std::int64_t processed_samples = 0;
  double processed_sample_ratio = 0.0;  // vs the full policy
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double decode_seconds = 0.0;  // clip loading, reported separately
};

// Times feature extraction per policy over the whole corpus, single-threaded.
// Clip decode happens once per clip, outside the timed region. A `full`
// policy is prepended when missing so speedups are always defined.
BenchReport run_bench(std::span<const ClipRef> clips, const ClipLoader& load,
                      std::vector<SegmentPolicy> policies, const FrameConfig& cfg);

std::string format_bench_table(const BenchReport& report);

}  // namespace specex
