// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "sltkit/types.h"

namespace slt {

/// Default configuration of the four segmentation strategies.
inline constexpr double kDefaultFixedWindowS = 26.0;
inline constexpr double kDefaultSlidingWindowS = 15.0;
inline constexpr double kDefaultStrideS = 2.0;
inline constexpr double kDefaultProbMaxLenS = 18.0;
inline constexpr double kDefaultProbThreshold = 0.5;
inline constexpr double kDefaultProbMinLenS = 0.2;

/// One span per gold segment. Throws ValidationError when the talk has none.
std::vector<Span> gold_spans(const Talk& talk);

/// [0,w), [w,2w), ... with a final shorter span ending at duration_s.
std::vector<Span> fixed_spans(double duration_s, double window_s);

/// One span per tick t = stride, 2*stride, ..., duration_s:
/// [max(0, t - window_s), t). Spans overlap by design.
std::vector<Span> sliding_spans(double duration_s, double window_s, double stride_s);

/// Tick times used by sliding_spans and by the retranslation loop: multiples
/// of step_s below duration_s, then duration_s itself.
std::vector<double> tick_times(double duration_s, double step_s);

struct ProbSplitConfig {
  double max_len_s = kDefaultProbMaxLenS;
  double threshold = kDefaultProbThreshold;
  double min_len_s = kDefaultProbMinLenS;
};

/// Streaming split over a boundary-probability trace.
///
/// Frames are scanned left to right. The open segment closes after the first
/// frame whose probability reaches the threshold once the segment (including
/// that frame) is at least min_len_s long. If the next frame would push the
/// segment past max_len_s, it closes instead after the highest-probability
/// frame seen since the last boundary (latest frame on ties) and scanning
/// resumes right after it. Boundaries fall on frame edges.
std::vector<Span> prob_spans(const ProbabilityTrace& trace, const ProbSplitConfig& config = {});

/// Adapts spans computed over a trace of slightly different length to a talk:
/// drops spans starting at or after duration_s and moves the last end to
/// exactly duration_s.
std::vector<Span> fit_to_duration(std::vector<Span> spans, double duration_s);

}  // namespace slt
