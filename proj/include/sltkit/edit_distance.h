// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

// Token-level Levenshtein distance, alignment and mWER-style resegmentation.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sltkit/types.h"

namespace slt {

/// Unit-cost insert/delete/substitute distance.
std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b);

/// For each hyp token, the index of the ref token it is aligned to
/// (match or substitution) in one minimum-cost alignment, or nullopt if it is
/// an insertion. Among optimal alignments the backtrace prefers diagonal
/// moves, then deletions of ref tokens, then insertions.
std::vector<std::optional<std::size_t>> align(std::span<const std::string> hyp, std::span<const std::string> ref);

struct Resegmentation {
  /// boundaries[i] is the end of hyp span i; span i is [boundaries[i-1], boundaries[i]).
  std::vector<std::size_t> boundaries;
  std::size_t cost = 0;

  std::vector<Tokens> spans(std::span<const std::string> hyp) const;
};

/// Splits hyp into refs.size() contiguous, possibly empty spans minimising
/// the summed edit distance to the corresponding refs. Among minimisers the
/// lexicographically smallest boundary vector wins. Requires refs non-empty.
Resegmentation resegment(std::span<const std::string> hyp, std::span<const Tokens> refs);

}  // namespace slt
