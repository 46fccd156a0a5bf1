// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

// Corpus-level BLEU over pre-tokenized segments.

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "sltkit/types.h"

namespace slt {

inline constexpr int kBleuMaxOrder = 4;
/// Added to a zero n-gram match count (divided by that order's total).
inline constexpr double kBleuFloor = 0.1;

/// Sufficient statistics; they add up across segments and talks.
struct BleuStats {
  std::array<std::size_t, kBleuMaxOrder> matches{};
  std::array<std::size_t, kBleuMaxOrder> totals{};
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  BleuStats& operator+=(const BleuStats& other);
  bool operator==(const BleuStats&) const = default;
};

/// Clipped n-gram matches of one hypothesis segment against one reference.
BleuStats segment_stats(std::span<const std::string> hyp, std::span<const std::string> ref);

/// BLEU in [0, 100]: geometric mean of the four modified precisions times
/// exp(1 - r/c) when c < r. An order with no hypothesis n-grams, or an empty
/// hypothesis, gives 0.
double bleu(const BleuStats& stats);

/// Pools statistics over aligned segment lists. Throws ParameterError when
/// the lists differ in length.
double corpus_bleu(std::span<const Tokens> hyps, std::span<const Tokens> refs);

}  // namespace slt
