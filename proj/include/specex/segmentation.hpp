#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "specex/manifest.hpp"

namespace specex {

// Declarative trim policies. TailFraction takes the trailing `fraction` of a
// fixed reference duration (normally the corpus global average), not of each
// clip's own length; a missing reference is filled in from the manifest by
// the caller before resolving.
struct FullPolicy {};
struct HeadPolicy {
  double duration_s = 0.0;  // > 0
};
struct SlotPolicy {
  double start_s = 0.0;  // >= 0, < end_s
  double end_s = 0.0;
};
struct TailFractionPolicy {
  double fraction = 0.0;  // (0, 1]
  std::optional<double> reference_s;  // > 0 when set
};

using SegmentPolicy =
    std::variant<FullPolicy, HeadPolicy, SlotPolicy, TailFractionPolicy>;

// Resolved half-open sample range. `clamped` is set when the request ran past
// the end of the clip and was trimmed.
struct Segment {
  std::int64_t start_sample = 0;
  std::int64_t end_sample = 0;
  bool clamped = false;

  std::int64_t length() const { return end_sample - start_sample; }
};

// CLI syntax: full | head:SECONDS | slot:START-END | tailfrac:FRACTION[:REF].
SegmentPolicy parse_policy(std::string_view text);  // throws ParseError
std::string format_policy(const SegmentPolicy& policy);

// Fills in a missing TailFraction reference; other policies pass through.
SegmentPolicy with_reference(SegmentPolicy policy, double default_reference_s);

// Time -> sample conversion is round(t * sr) with half-open intervals.
// TailFraction computes its length first (round(fraction*ref*sr)) and anchors
// it at round(ref*sr), so on a long-enough clip the segment length is exact.
Segment resolve_segment(const SegmentPolicy& policy, std::int64_t clip_len_samples,
                        int sample_rate);

double global_average_duration(const CorpusManifest& manifest);

}  // namespace specex
