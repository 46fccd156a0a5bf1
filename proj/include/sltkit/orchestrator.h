// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

// The retranslation loop: every tick the active segment is retranslated from
// its start up to the current time and the display stream is rebuilt.

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "sltkit/merger.h"
#include "sltkit/segmenters.h"
#include "sltkit/translator.h"
#include "sltkit/types.h"

namespace slt {

enum class Strategy { kGold, kProb, kFixed, kMerged };

std::string_view to_string(Strategy strategy);
std::optional<Strategy> parse_strategy(std::string_view text);

struct BiasConfig {
  double beta = 0.25;
  int mask_k = 5;
};

struct RunConfig {
  Strategy strategy = Strategy::kGold;
  double tick_s = 2.0;
  double fixed_window_s = kDefaultFixedWindowS;
  double sliding_window_s = kDefaultSlidingWindowS;
  double stride_s = kDefaultStrideS;
  std::size_t output_mask_k = 0;
  std::optional<BiasConfig> bias;
  MergeConfig merge;
  ProbSplitConfig prob;
};

/// Throws ParameterError on invalid settings, including bias combined with
/// the merged strategy.
void validate(const RunConfig& config);

/// The spans a segment-based strategy retranslates. The merged strategy has
/// none; prob requires a trace.
std::vector<Span> strategy_spans(const Talk& talk, const RunConfig& config, const ProbabilityTrace* trace);

/// Runs one talk. Updates are emitted at every multiple of tick_s below the
/// talk duration and a Complete update at the duration. A span finalizes at
/// the first tick at or after its end. Translator failures are rethrown with
/// the tick in the message, keeping their type.
UpdateLog run_talk(const Talk& talk, const RunConfig& config, Translator& translator,
                   const ProbabilityTrace* trace = nullptr);

/// For each update, the length of the longest token prefix it shares with
/// every later update.
std::vector<std::size_t> finalized_prefix(const UpdateLog& log);

std::size_t common_prefix_length(std::span<const std::string> a, std::span<const std::string> b);

}  // namespace slt
