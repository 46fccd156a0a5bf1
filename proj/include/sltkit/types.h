// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slt {

using Tokens = std::vector<std::string>;

/// A source word with its position in the talk's audio, in seconds.
struct TimedToken {
  std::string text;
  double start_s = 0.0;
  double end_s = 0.0;

  bool operator==(const TimedToken&) const = default;
};

/// Human-annotated utterance with its aligned source and target text.
struct GoldSegment {
  double start_s = 0.0;
  double end_s = 0.0;
  Tokens source_text;
  Tokens target_text;

  double duration() const { return end_s - start_s; }
  bool operator==(const GoldSegment&) const = default;
};

/// One talk: the timed source stream plus its gold segmentation.
struct Talk {
  std::string id;
  double duration_s = 0.0;
  std::vector<TimedToken> source;
  std::vector<GoldSegment> gold;

  bool operator==(const Talk&) const = default;
};

enum class SpanKind { kGold, kProb, kFixed, kSliding };

std::string_view to_string(SpanKind kind);
std::optional<SpanKind> parse_span_kind(std::string_view text);

/// Half-open interval [start_s, end_s) designating one translation unit.
struct Span {
  double start_s = 0.0;
  double end_s = 0.0;
  SpanKind kind = SpanKind::kFixed;

  double duration() const { return end_s - start_s; }
  bool contains(double t) const { return start_s <= t && t < end_s; }
  bool operator==(const Span&) const = default;
};

/// Per-frame segmentation boundary probabilities, e.g. the output of an
/// external boundary classifier.
struct ProbabilityTrace {
  double frame_period_s = 0.0;
  std::vector<double> probs;

  double duration() const { return frame_period_s * static_cast<double>(probs.size()); }
  bool operator==(const ProbabilityTrace&) const = default;
};

enum class UpdateKind { kPartial, kComplete };

/// What the viewer sees at one instant: the full displayed token sequence.
struct DisplayUpdate {
  UpdateKind kind = UpdateKind::kPartial;
  double emit_s = 0.0;
  Tokens tokens;

  bool operator==(const DisplayUpdate&) const = default;
};

/// The display stream of one talk. The last update is Complete and carries
/// the final translation.
struct UpdateLog {
  std::string talk_id;
  std::vector<DisplayUpdate> updates;

  const Tokens& final_tokens() const { return updates.back().tokens; }
  double final_emit_s() const { return updates.back().emit_s; }
  bool operator==(const UpdateLog&) const = default;
};

/// Splits on runs of ASCII whitespace.
Tokens tokenize(std::string_view text);
std::string join(const Tokens& tokens, std::string_view sep = " ");

/// Text of every source token whose interval intersects [start_s, end_s).
Tokens source_tokens_in(const Talk& talk, double start_s, double end_s);

}  // namespace slt
