#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specex/audio.hpp"
#include "specex/feature_csv.hpp"
#include "specex/manifest.hpp"
#include "specex/segmentation.hpp"
#include "specex/synth.hpp"

namespace specex {

struct ClipRef {
  std::string id;  // filename in CSV outputs
  std::string label;
};

// Loads clip i; must be safe to call concurrently for distinct i.
using ClipLoader = std::function<AudioBuffer(std::size_t)>;

struct ExtractOutcome {
  std::vector<FeatureRow> rows;  // successful clips, in input order
  std::vector<std::pair<std::string, std::string>> failures;  // (id, error kind)
};

// Extracts one feature vector per clip under the given policy. With jobs > 1
// the clips fan out to a worker pool; results are still emitted in input
// order, so the output is identical to a serial run. Per-clip errors are
// collected, not thrown. The policy must have its tail reference resolved.
ExtractOutcome extract_all(std::span<const ClipRef> clips, const ClipLoader& load,
                           const SegmentPolicy& policy, const FrameConfig& cfg,
                           unsigned jobs = 1);

std::vector<ClipRef> manifest_refs(const CorpusManifest& manifest);
ClipLoader manifest_loader(const CorpusManifest& manifest,
                           const std::filesystem::path& base_dir);

// In-memory source that renders clips on demand; used where writing WAVs
// would only add I/O.
std::vector<ClipRef> plan_refs(std::span<const PlannedClip> plan);
ClipLoader synth_loader(CorpusConfig config, std::vector<PlannedClip> plan);

}  // namespace specex
