// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sltkit/dataprep.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sltkit/errors.h"
#include "sltkit/io.h"

namespace slt {

std::size_t ratio_count(double fraction, std::size_t n_tokens) {
  const double scaled = std::clamp(fraction, 0.0, 1.0) * static_cast<double>(n_tokens);
  // The epsilon keeps values like 0.3 * 5 = 1.4999999999999998 on the half-up side.
  const auto count = static_cast<std::size_t>(std::floor(scaled + 0.5 + 1e-9));
  return std::min(count, n_tokens);
}

Tokens target_extract_by_ratio(std::span<const GoldSegment> gold, double start_s, double end_s) {
  Tokens out;
  for (const auto& seg : gold) {
    if (!(seg.start_s < end_s && seg.end_s > start_s)) continue;
    const double d = seg.duration();
    const std::size_t n = seg.target_text.size();
    const std::size_t from = ratio_count((std::max(start_s, seg.start_s) - seg.start_s) / d, n);
    const std::size_t to = ratio_count((std::min(end_s, seg.end_s) - seg.start_s) / d, n);
    for (std::size_t i = from; i < to; ++i) out.push_back(seg.target_text[i]);
  }
  return out;
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::kOriginal: return "original";
    case Variant::kPrefix: return "prefix";
    case Variant::kContext: return "context";
    case Variant::kContextPrefix: return "context_prefix";
    case Variant::kWindow: return "window";
  }
  return "?";
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

TrainingExample example_for_span(const Talk& talk, const Span& span, Variant variant) {
  TrainingExample ex;
  ex.talk_id = talk.id;
  ex.span = span;
  ex.source = source_tokens_in(talk, span.start_s, span.end_s);
  ex.target = target_extract_by_ratio(talk.gold, span.start_s, span.end_s);
  ex.variant = variant;
  return ex;
}

std::vector<TrainingExample> make_originals(const Talk& talk) {
  std::vector<TrainingExample> out;
  for (const auto& seg : talk.gold) {
    out.push_back(example_for_span(talk, {seg.start_s, seg.end_s, SpanKind::kGold}, Variant::kOriginal));
  }
  return out;
}

std::vector<TrainingExample> make_prefixes(const Talk& talk, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TrainingExample> out;
  for (const auto& seg : talk.gold) {
    out.push_back(example_for_span(talk, {seg.start_s, seg.end_s, SpanKind::kGold}, Variant::kOriginal));
    const double d = seg.duration();
    double end = seg.start_s + rng.uniform(0.1 * d, d);
    if (end >= seg.end_s) end = std::nextafter(seg.end_s, seg.start_s);
    out.push_back(example_for_span(talk, {seg.start_s, end, SpanKind::kGold}, Variant::kPrefix));
  }
  return out;
}

int sample_context_depth(Rng& rng) {
  const double u = rng.uniform();
  if (u < 0.5) return 0;
  return u < 0.75 ? 1 : 2;
}

std::vector<TrainingExample> make_context(const Talk& talk, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TrainingExample> out;
  for (std::size_t i = 0; i < talk.gold.size(); ++i) {
    const auto depth = static_cast<std::size_t>(sample_context_depth(rng));
    const std::size_t first = i - std::min(depth, i);
    const auto& last = talk.gold[i];
    const double start = talk.gold[first].start_s;
    out.push_back(example_for_span(talk, {start, last.end_s, SpanKind::kGold},
                                   first == i ? Variant::kOriginal : Variant::kContext));
    const double cut = last.start_s + rng.uniform(0.1, 0.9) * last.duration();
    out.push_back(example_for_span(talk, {start, cut, SpanKind::kGold}, Variant::kContextPrefix));
  }
  return out;
}

std::vector<Span> tile_windows(double duration_s, const std::function<double()>& next_length) {
  std::vector<Span> spans;
  double start = 0.0;
  while (start < duration_s) {
    const double len = next_length();
    if (!(len > 0.0)) throw ParameterError("window length must be positive");
    const double end = std::min(start + len, duration_s);
    spans.push_back({start, end, SpanKind::kFixed});
    start = end;
  }
  return spans;
}

std::vector<TrainingExample> make_windows(const Talk& talk, std::uint64_t seed, double min_s, double max_s) {
  if (!(min_s > 0.0 && min_s < max_s)) throw ParameterError("window bounds need 0 < min < max");
  Rng rng(seed);
  std::vector<TrainingExample> out;
  for (const auto& span : tile_windows(talk.duration_s, [&] { return rng.uniform(min_s, max_s); })) {
    out.push_back(example_for_span(talk, span, Variant::kWindow));
  }
  return out;
}

void write_examples(const std::vector<TrainingExample>& examples, std::ostream& out) {
  for (const auto& ex : examples) {
    out << to_string(ex.variant) << '\t' << ex.talk_id << '\t' << format_seconds(ex.span.start_s) << '\t'
        << format_seconds(ex.span.end_s) << '\t' << join(ex.source) << '\t' << join(ex.target) << '\n';
  }
}

}  // namespace slt
