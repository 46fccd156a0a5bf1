// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "sltkit/dataprep.h"
#include "sltkit/errors.h"
#include "sltkit/segmenters.h"

using namespace slt;

namespace {

std::vector<std::pair<double, double>> bounds(const std::vector<Span>& spans) {
  std::vector<std::pair<double, double>> out;
  for (const auto& s : spans) out.emplace_back(s.start_s, s.end_s);
  return out;
}

using Bounds = std::vector<std::pair<double, double>>;

bool partitions(const std::vector<Span>& spans, double duration) {
  if (spans.empty()) return duration == 0.0;
  if (spans.front().start_s != 0.0 || spans.back().end_s != duration) return false;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (!(spans[i].start_s < spans[i].end_s)) return false;
    if (i > 0 && spans[i].start_s != spans[i - 1].end_s) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("gold spans mirror gold segments") {
  Talk talk{"g", 9, {{"a", 0, 1}}, {{0, 5, {"a"}, {"x"}}, {5, 9, {"b"}, {"y"}}}};
  const auto spans = gold_spans(talk);
  CHECK(bounds(spans) == Bounds{{0, 5}, {5, 9}});
  CHECK(spans[0].kind == SpanKind::kGold);
  talk.gold.clear();
  CHECK_THROWS_WITH(gold_spans(talk), doctest::Contains("gold segmentation unavailable"));
}

TEST_CASE("fixed spans") {
  CHECK(bounds(fixed_spans(60, 26)) == Bounds{{0, 26}, {26, 52}, {52, 60}});
  CHECK(bounds(fixed_spans(26, 26)) == Bounds{{0, 26}});
  CHECK(fixed_spans(0, 26).empty());
  CHECK_THROWS_AS(fixed_spans(10, 0), ParameterError);
  CHECK_THROWS_AS(fixed_spans(10, -1), ParameterError);
  for (double d : {0.5, 25.9, 26.0, 77.7, 120.0}) CHECK(partitions(fixed_spans(d, 26), d));
}

TEST_CASE("sliding spans") {
  CHECK(bounds(sliding_spans(6, 15, 2)) == Bounds{{0, 2}, {0, 4}, {0, 6}});
  const auto s = bounds(sliding_spans(20, 15, 2));
  REQUIRE(s.size() == 10);
  CHECK(Bounds(s.end() - 4, s.end()) == Bounds{{0, 14}, {1, 16}, {3, 18}, {5, 20}});
  CHECK(bounds(sliding_spans(3, 15, 2)) == Bounds{{0, 2}, {0, 3}});
  CHECK_THROWS_AS(sliding_spans(3, 15, 0), ParameterError);
  CHECK_THROWS_AS(sliding_spans(3, 0, 2), ParameterError);
}

TEST_CASE("tick times end at the duration") {
  CHECK(tick_times(6, 2) == std::vector<double>{2, 4, 6});
  CHECK(tick_times(5, 2) == std::vector<double>{2, 4, 5});
  CHECK(tick_times(1, 2) == std::vector<double>{1});
}

TEST_CASE("prob spans") {
  SUBCASE("threshold crossing") {
    CHECK(bounds(prob_spans({1.0, {0.1, 0.9, 0.1, 0.1}}, {18, 0.5, 0.2})) == Bounds{{0, 2}, {2, 4}});
  }
  SUBCASE("flat trace degrades to fixed windows") {
    const ProbabilityTrace flat{1.0, std::vector<double>(40, 0.0)};
    CHECK(bounds(prob_spans(flat, {18, 0.5, 0.2})) == Bounds{{0, 18}, {18, 36}, {36, 40}});
  }
  SUBCASE("minimum length") {
    CHECK(bounds(prob_spans({1.0, {0.1, 0.2, 0.6, 0.7, 0.1}}, {18, 0.5, 2.0})) == Bounds{{0, 3}, {3, 5}});
  }
  SUBCASE("cap splits at the latest maximum") {
    // No frame crosses 0.5; the first 4 s window peaks at frames 1 and 2.
    CHECK(bounds(prob_spans({1.0, {0.1, 0.3, 0.3, 0.2, 0.1, 0.1}}, {4, 0.5, 0.2})) == Bounds{{0, 3}, {3, 6}});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(prob_spans({1.0, {}}, {}), ValidationError);
    CHECK_THROWS_AS(prob_spans({1.0, {0.1}}, {0.5, 0.5, 0.2}), ParameterError);
  }
}

TEST_CASE("prob spans partition the trace and respect the cap") {
  Rng rng(11);
  for (int round = 0; round < 200; ++round) {
    ProbabilityTrace trace{0.02 * (1 + round % 5), {}};
    const auto frames = 1 + static_cast<std::size_t>(rng.uniform() * 3000);
    for (std::size_t i = 0; i < frames; ++i) trace.probs.push_back(rng.uniform() < 0.97 ? rng.uniform() * 0.5 : 1.0);
    const ProbSplitConfig cfg{rng.uniform(1.0, 18.0), 0.5, 0.2};
    const auto spans = prob_spans(trace, cfg);
    CHECK(partitions(spans, spans.back().end_s));
    CHECK(spans.back().end_s == doctest::Approx(trace.duration()));
    for (const auto& s : spans) CHECK(s.duration() <= cfg.max_len_s + 1e-9);
  }
}

TEST_CASE("fit to duration") {
  const std::vector<Span> spans{{0, 4, SpanKind::kProb}, {4, 8, SpanKind::kProb}, {8, 9, SpanKind::kProb}};
  CHECK(bounds(fit_to_duration(spans, 10)) == Bounds{{0, 4}, {4, 8}, {8, 10}});
  CHECK(bounds(fit_to_duration(spans, 6)) == Bounds{{0, 4}, {4, 6}});
}
