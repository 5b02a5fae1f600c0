#include <doctest.h>

#include <cmath>
#include <variant>

#include "specex/errors.hpp"
#include "specex/rng.hpp"
#include "specex/segmentation.hpp"

using namespace specex;

TEST_CASE("tail fraction reproduces the 162-180 s slot") {
  const int sr = 22050;
  const std::int64_t clip_len = 180 * sr;
  const auto seg =
      resolve_segment(TailFractionPolicy{0.10, 180.0}, clip_len, sr);
  CHECK(seg.start_sample == 3572100);
  CHECK(seg.end_sample == 3969000);
  CHECK_FALSE(seg.clamped);
  CHECK(seg.length() == std::llround(0.10 * 180.0 * sr));
}

TEST_CASE("head exactly fitting the clip is not clamped") {
  const auto seg = resolve_segment(HeadPolicy{30.0}, 30 * 22050, 22050);
  CHECK(seg.start_sample == 0);
  CHECK(seg.end_sample == 30 * 22050);
  CHECK_FALSE(seg.clamped);
}

TEST_CASE("head longer than the clip clamps") {
  const auto seg = resolve_segment(HeadPolicy{60.0}, 30 * 22050, 22050);
  CHECK(seg.end_sample == 30 * 22050);
  CHECK(seg.clamped);
}

TEST_CASE("slot past the end is empty") {
  CHECK_THROWS_WITH_AS(
      resolve_segment(SlotPolicy{200.0, 210.0}, 180 * 22050, 22050),
      doctest::Contains("EmptySegment"), Error);
}

TEST_CASE("full is the whole clip") {
  const auto seg = resolve_segment(FullPolicy{}, 12345, 22050);
  CHECK(seg.start_sample == 0);
  CHECK(seg.end_sample == 12345);
  CHECK_FALSE(seg.clamped);
}

TEST_CASE("global average duration") {
  CorpusManifest m;
  m.entries.push_back({"a.wav", "x", 120.0, true, 1});
  m.entries.push_back({"b.wav", "y", 240.0, true, 2});
  CHECK(global_average_duration(m) == doctest::Approx(180.0));

  CorpusManifest one;
  one.entries.push_back({"c.wav", "z", 30.0, true, 3});
  CHECK(global_average_duration(one) == doctest::Approx(30.0));

  CorpusManifest empty;
  CHECK_THROWS_WITH_AS(global_average_duration(empty),
                       doctest::Contains("EmptyManifest"), Error);
}

TEST_CASE("policy parsing round-trips") {
  for (const char* text :
       {"full", "head:5", "head:2.5", "slot:10-20", "slot:0-0.5",
        "tailfrac:0.1", "tailfrac:0.1:180", "tailfrac:0.25:30"}) {
    const auto policy = parse_policy(text);
    CHECK(format_policy(policy) == text);
    CHECK(format_policy(parse_policy(format_policy(policy))) == text);
  }
}

TEST_CASE("policy parsing rejects junk") {
  for (const char* text :
       {"", "fully", "head:", "head:abc", "head:-3", "head:0", "slot:10",
        "slot:20-10", "slot:-1-5", "tailfrac:0", "tailfrac:1.5",
        "tailfrac:0.1:0", "tailfrac:0.1:-5", "head:5x"}) {
    CHECK_THROWS_AS(parse_policy(text), Error);
  }
}

TEST_CASE("with_reference fills only a missing tail reference") {
  auto p = with_reference(parse_policy("tailfrac:0.1"), 180.0);
  const auto& t = std::get<TailFractionPolicy>(p);
  REQUIRE(t.reference_s.has_value());
  CHECK(*t.reference_s == 180.0);

  auto q = with_reference(parse_policy("tailfrac:0.2:60"), 180.0);
  CHECK(*std::get<TailFractionPolicy>(q).reference_s == 60.0);

  auto r = with_reference(parse_policy("head:5"), 180.0);
  CHECK(std::holds_alternative<HeadPolicy>(r));
}

TEST_CASE("unresolved tail reference is an error at resolve time") {
  CHECK_THROWS_WITH_AS(
      resolve_segment(TailFractionPolicy{0.1, std::nullopt}, 1000, 100),
      doctest::Contains("InvalidPolicy"), Error);
}

TEST_CASE("property: random policies resolve to sane segments") {
  Xorshift64Star rng(4242);
  const int sr = 22050;
  std::size_t resolved = 0, empty = 0;

  for (int trial = 0; trial < 1000; ++trial) {
    const std::int64_t clip_len = 1 + static_cast<std::int64_t>(rng.below(300 * sr));
    SegmentPolicy policy;
    std::int64_t requested_end = 0;
    switch (rng.below(4)) {
      case 0:
        policy = FullPolicy{};
        requested_end = clip_len;
        break;
      case 1: {
        const double d = 0.01 + 200.0 * rng.uniform01();
        policy = HeadPolicy{d};
        requested_end = std::llround(d * sr);
        break;
      }
      case 2: {
        const double a = 250.0 * rng.uniform01();
        const double b = a + 0.01 + 100.0 * rng.uniform01();
        policy = SlotPolicy{a, b};
        requested_end = std::llround(b * sr);
        break;
      }
      default: {
        const double f = 0.05 + 0.95 * rng.uniform01();
        const double ref = 1.0 + 250.0 * rng.uniform01();
        policy = TailFractionPolicy{f, ref};
        requested_end = std::llround(ref * sr);
        break;
      }
    }

    try {
      const auto seg = resolve_segment(policy, clip_len, sr);
      ++resolved;
      // Subrange of [0, clip_len).
      CHECK(seg.start_sample >= 0);
      CHECK(seg.end_sample <= clip_len);
      CHECK(seg.length() >= 1);
      // The clamp flag fires exactly when the request overran the clip.
      CHECK(seg.clamped == (requested_end > clip_len));

      // Idempotence: Full over the resolved slice is the whole slice.
      const auto again = resolve_segment(FullPolicy{}, seg.length(), sr);
      CHECK(again.start_sample == 0);
      CHECK(again.end_sample == seg.length());

      // Tail slots on long-enough clips have the exact requested length.
      if (const auto* t = std::get_if<TailFractionPolicy>(&policy)) {
        if (clip_len >= std::llround(*t->reference_s * sr))
          CHECK(seg.length() == std::llround(t->fraction * *t->reference_s * sr));
      }
    } catch (const Error& e) {
      CHECK(e.kind() == "EmptySegment");
      ++empty;
    }
  }
  // The draw ranges make both outcomes common; guard against dead branches.
  CHECK(resolved > 300);
  CHECK(empty > 50);
}
