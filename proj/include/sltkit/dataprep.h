// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "sltkit/types.h"

namespace slt {

/// Target tokens for an arbitrary time span, cut from the gold segments by
/// length ratio. For each intersected segment of n target tokens the slice
/// [round(n * a), round(n * b)) is taken, where a and b are the fractions of
/// the segment's duration at which the overlap starts and ends (half-up
/// rounding). Slices are concatenated in time order. A span that touches no
/// segment yields no tokens.
Tokens target_extract_by_ratio(std::span<const GoldSegment> gold, double start_s, double end_s);

/// Half-up rounding of a ratio-scaled token count.
std::size_t ratio_count(double fraction, std::size_t n_tokens);

enum class Variant { kOriginal, kPrefix, kContext, kContextPrefix, kWindow };

std::string_view to_string(Variant variant);

struct TrainingExample {
  std::string talk_id;
  Span span;
  Tokens source;
  Tokens target;
  Variant variant = Variant::kOriginal;

  bool operator==(const TrainingExample&) const = default;
};

/// mt19937_64 with a platform-independent mapping to [0,1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0,1) with 53 random bits.
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

/// The gold segments as they are.
std::vector<TrainingExample> make_originals(const Talk& talk);

/// Each gold segment followed by one prefix of it whose duration is uniform
/// in [0.1 d, d).
std::vector<TrainingExample> make_prefixes(const Talk& talk, std::uint64_t seed);

/// Number of previous segments to prepend: 0 with p=0.5, 1 with p=0.25,
/// 2 with p=0.25.
int sample_context_depth(Rng& rng);

/// Per segment: the (possibly context-extended) example, then a variant whose
/// last concatenated segment is truncated by a uniform ratio in [0.1, 0.9].
std::vector<TrainingExample> make_context(const Talk& talk, std::uint64_t seed);

/// Tiles [0, duration_s) left to right; each window length comes from
/// next_length(), the last one is clipped at duration_s.
std::vector<Span> tile_windows(double duration_s, const std::function<double()>& next_length);

/// Windows of uniform length in [min_s, max_s] tiling the talk.
std::vector<TrainingExample> make_windows(const Talk& talk, std::uint64_t seed, double min_s = 10.0,
                                          double max_s = 30.0);

/// Builds an example for an arbitrary span: intersecting source tokens and
/// the ratio-extracted target.
TrainingExample example_for_span(const Talk& talk, const Span& span, Variant variant);

/// `variant talk_id start end source target`, tab-separated, one per line.
void write_examples(const std::vector<TrainingExample>& examples, std::ostream& out);

}  // namespace slt
