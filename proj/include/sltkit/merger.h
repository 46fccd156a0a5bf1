// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

// Merging translations of overlapping windows into one growing output
// stream. The stream and the newest window translation are aligned on a
// common token substring; everything left of it is kept from the stream and
// everything from it onwards comes from the window.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sltkit/translator.h"
#include "sltkit/types.h"

namespace slt {

enum class MergeMode {
  kLongest,  ///< longest common substring, last-occurring on ties
  kLast,     ///< last-occurring common substring of at least last_min_len tokens
};

struct MergeConfig {
  double tau = 0.4;
  double backtrack_step_s = 0.1;
  int max_backtracks = 3;
  MergeMode mode = MergeMode::kLongest;
  std::size_t last_min_len = 3;
};

void validate(const MergeConfig& config);

/// A maximal common run: output[output_start, +length) equals
/// window[window_start, +length) and cannot be extended either way.
struct Match {
  std::size_t output_start = 0;
  std::size_t window_start = 0;
  std::size_t length = 0;

  bool operator==(const Match&) const = default;
};

/// All maximal common runs, ordered by (output_start, window_start).
std::vector<Match> common_substrings(std::span<const std::string> output, std::span<const std::string> window);

/// kLongest: maximum length, ties to the largest output position.
/// kLast: largest output position among runs of length >= last_min_len.
/// Remaining ties go to the largest window position.
std::optional<Match> select_match(std::span<const Match> matches, MergeMode mode, const MergeConfig& config);

struct MergeState {
  Tokens output;
  int backtracks_used = 0;
  /// Tokens at positions below this index came from earlier windows and are
  /// left untouched by the latest merge.
  std::size_t committed = 0;
};

struct Merged {
  Tokens output;
  Match match;
};
struct NeedBacktrack {};
struct ForcedMerge {
  Tokens output;
  std::optional<Match> match;  ///< nullopt when the window was appended
};

using MergeResult = std::variant<Merged, NeedBacktrack, ForcedMerge>;

/// One merge attempt. A match qualifies iff its length >= tau * |window|.
/// Without one, asks for a backtrack while backtracks_used < max_backtracks,
/// otherwise merges at the best available match (falling back to the
/// longest rule in kLast mode) or appends when nothing matches. An empty
/// stream is initialised by appending.
MergeResult merge_step(const MergeState& state, std::span<const std::string> window, const MergeConfig& config);

/// output[0, match.output_start) + window[match.window_start, end).
Tokens splice(std::span<const std::string> output, std::span<const std::string> window, const Match& match);

struct MergingRunOptions {
  double window_s = 15.0;
  double stride_s = 2.0;
  std::size_t output_mask_k = 0;
};

/// Counters collected while merging, for tests and diagnostics.
struct MergeStats {
  std::size_t windows = 0;
  std::size_t translator_calls = 0;
  std::size_t backtracks = 0;
  std::size_t forced_merges = 0;
  std::size_t max_calls_per_window = 0;
};

/// Translates every sliding window of the talk, merges each into the stream
/// (widening the window start by backtrack_step_s per backtrack, never below
/// 0) and emits the stream as a Partial update at each tick and as the
/// Complete update at the end. The output mask hides at most the last k
/// tokens contributed by the newest window.
UpdateLog run_merging_translation(const Talk& talk, Translator& translator, const MergeConfig& config,
                                  const MergingRunOptions& options = {}, MergeStats* stats = nullptr);

}  // namespace slt
