#include "specex/pipeline.hpp"

#include <atomic>
#include <memory>
#include <thread>

#include "specex/errors.hpp"
#include "specex/features.hpp"
#include "specex/wav.hpp"

namespace specex {
namespace {

struct ClipResult {
  bool ok = false;
  FeatureVector features;
  std::string error_kind;
};

ClipResult extract_one(const AudioBuffer& buf, const SegmentPolicy& policy,
                       const FrameConfig& cfg) {
  ClipResult r;
  try {
    const Segment seg = resolve_segment(
        policy, static_cast<std::int64_t>(buf.samples.size()), buf.sample_rate);
    r.features = extract_feature_vector(buf, seg, cfg);
    r.ok = true;
  } catch (const Error& e) {
    r.error_kind = e.kind();
  }
  return r;
}

}  // namespace

ExtractOutcome extract_all(std::span<const ClipRef> clips, const ClipLoader& load,
                           const SegmentPolicy& policy, const FrameConfig& cfg,
                           unsigned jobs) {
  cfg.validate();
  std::vector<ClipResult> results(clips.size());

  if (jobs <= 1) {
    for (std::size_t i = 0; i < clips.size(); ++i)
      results[i] = extract_one(load(i), policy, cfg);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= clips.size()) return;
        try {
          results[i] = extract_one(load(i), policy, cfg);
        } catch (const Error& e) {
          results[i].error_kind = e.kind();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ExtractOutcome out;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    if (results[i].ok)
      out.rows.push_back({clips[i].id, results[i].features, clips[i].label});
    else
      out.failures.emplace_back(clips[i].id, results[i].error_kind);
  }
  return out;
}

std::vector<ClipRef> manifest_refs(const CorpusManifest& manifest) {
  std::vector<ClipRef> refs;
  refs.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) refs.push_back({e.filename, e.label});
  return refs;
}

ClipLoader manifest_loader(const CorpusManifest& manifest,
                           const std::filesystem::path& base_dir) {
  auto entries = std::make_shared<std::vector<ManifestEntry>>(manifest.entries);
  return [entries, base_dir](std::size_t i) {
    return read_wav(base_dir / (*entries)[i].filename);
  };
}

std::vector<ClipRef> plan_refs(std::span<const PlannedClip> plan) {
  std::vector<ClipRef> refs;
  refs.reserve(plan.size());
  for (const auto& p : plan) refs.push_back({p.filename, p.label});
  return refs;
}

ClipLoader synth_loader(CorpusConfig config, std::vector<PlannedClip> plan) {
  auto cfg = std::make_shared<CorpusConfig>(std::move(config));
  auto clips = std::make_shared<std::vector<PlannedClip>>(std::move(plan));
  return [cfg, clips](std::size_t i) { return render_clip(*cfg, (*clips)[i]); };
}

}  // namespace specex
