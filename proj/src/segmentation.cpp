#include "specex/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "specex/errors.hpp"

namespace specex {
namespace {

double parse_number(std::string_view text, std::string_view what) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error("ParseError", "bad " + std::string(what) + ": '" + s + "'");
  }
  if (used != s.size())
    throw Error("ParseError", "trailing junk in " + std::string(what) + ": '" + s + "'");
  if (!std::isfinite(v))
    throw Error("ParseError", std::string(what) + " must be finite");
  return v;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void validate(const SegmentPolicy& policy) {
  if (const auto* h = std::get_if<HeadPolicy>(&policy)) {
    if (h->duration_s <= 0.0)
      throw Error("InvalidPolicy", "head duration must be > 0");
  } else if (const auto* s = std::get_if<SlotPolicy>(&policy)) {
    if (s->start_s < 0.0 || s->start_s >= s->end_s)
      throw Error("InvalidPolicy", "slot needs 0 <= start < end");
  } else if (const auto* t = std::get_if<TailFractionPolicy>(&policy)) {
    if (t->fraction <= 0.0 || t->fraction > 1.0)
      throw Error("InvalidPolicy", "tail fraction must be in (0, 1]");
    if (t->reference_s && *t->reference_s <= 0.0)
      throw Error("InvalidPolicy", "tail reference must be > 0");
  }
}

}  // namespace

SegmentPolicy parse_policy(std::string_view text) {
  SegmentPolicy policy;
  if (text == "full") {
    policy = FullPolicy{};
  } else if (text.starts_with("head:")) {
    policy = HeadPolicy{parse_number(text.substr(5), "head duration")};
  } else if (text.starts_with("slot:")) {
    std::string_view body = text.substr(5);
    std::size_t dash = body.find('-');
    if (dash == std::string_view::npos)
      throw Error("ParseError", "slot needs START-END: '" + std::string(text) + "'");
    policy = SlotPolicy{parse_number(body.substr(0, dash), "slot start"),
                        parse_number(body.substr(dash + 1), "slot end")};
  } else if (text.starts_with("tailfrac:")) {
    std::string_view body = text.substr(9);
    std::size_t colon = body.find(':');
    TailFractionPolicy t;
    if (colon == std::string_view::npos) {
      t.fraction = parse_number(body, "tail fraction");
    } else {
      t.fraction = parse_number(body.substr(0, colon), "tail fraction");
      t.reference_s = parse_number(body.substr(colon + 1), "tail reference");
    }
    policy = t;
  } else {
    throw Error("ParseError", "unknown policy '" + std::string(text) +
                                  "' (want full, head:S, slot:A-B, tailfrac:F[:REF])");
  }
  validate(policy);
  return policy;
}

std::string format_policy(const SegmentPolicy& policy) {
  if (std::holds_alternative<FullPolicy>(policy)) return "full";
  if (const auto* h = std::get_if<HeadPolicy>(&policy))
    return "head:" + format_number(h->duration_s);
  if (const auto* s = std::get_if<SlotPolicy>(&policy))
    return "slot:" + format_number(s->start_s) + "-" + format_number(s->end_s);
  const auto& t = std::get<TailFractionPolicy>(policy);
  std::string out = "tailfrac:" + format_number(t.fraction);
  if (t.reference_s) out += ":" + format_number(*t.reference_s);
  return out;
}

SegmentPolicy with_reference(SegmentPolicy policy, double default_reference_s) {
  if (auto* t = std::get_if<TailFractionPolicy>(&policy)) {
    if (!t->reference_s) t->reference_s = default_reference_s;
  }
  return policy;
}

Segment resolve_segment(const SegmentPolicy& policy, std::int64_t clip_len_samples,
                        int sample_rate) {
  if (clip_len_samples < 1) throw Error("EmptySegment", "clip has no samples");
  if (sample_rate <= 0) throw Error("InvalidParams", "sample_rate must be > 0");
  validate(policy);

  const auto to_samples = [sample_rate](double seconds) {
    return static_cast<std::int64_t>(std::llround(seconds * sample_rate));
  };

  std::int64_t req_start = 0, req_end = 0;
  if (std::holds_alternative<FullPolicy>(policy)) {
    return Segment{0, clip_len_samples, false};
  } else if (const auto* h = std::get_if<HeadPolicy>(&policy)) {
    req_start = 0;
    req_end = to_samples(h->duration_s);
  } else if (const auto* s = std::get_if<SlotPolicy>(&policy)) {
    req_start = to_samples(s->start_s);
    req_end = to_samples(s->end_s);
  } else {
    const auto& t = std::get<TailFractionPolicy>(policy);
    if (!t.reference_s)
      throw Error("InvalidPolicy", "tail fraction reference not resolved");
    req_end = to_samples(*t.reference_s);
    req_start = req_end - to_samples(t.fraction * *t.reference_s);
    if (req_start < 0) req_start = 0;
  }

  Segment seg;
  seg.start_sample = std::max<std::int64_t>(req_start, 0);
  seg.end_sample = std::min(req_end, clip_len_samples);
  seg.clamped = req_end > clip_len_samples;
  if (seg.start_sample >= seg.end_sample)
    throw Error("EmptySegment", "policy " + format_policy(policy) +
                                    " selects no samples on a clip of " +
                                    std::to_string(clip_len_samples));
  return seg;
}

double global_average_duration(const CorpusManifest& manifest) {
  if (manifest.entries.empty()) throw Error("EmptyManifest", "no entries");
  double sum = 0.0;
  for (const auto& e : manifest.entries) sum += e.duration_s;
  return sum / static_cast<double>(manifest.entries.size());
}

}  // namespace specex
