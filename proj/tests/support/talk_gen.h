// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "sltkit/types.h"

namespace slt::testing {

struct TalkGenOptions {
  double min_duration_s = 20.0;
  double max_duration_s = 120.0;
  std::size_t max_tokens = 300;  // per side
  double max_gap_s = 1.5;
  double min_segment_s = 2.0;
  double max_segment_s = 12.0;
  std::size_t vocabulary = 100000;
};

/// A random valid talk: gold segments separated by short gaps, source tokens
/// spread evenly inside them, target tokens drawn from a large vocabulary.
Talk generate_talk(std::uint64_t seed, const TalkGenOptions& options = {});

}  // namespace slt::testing
