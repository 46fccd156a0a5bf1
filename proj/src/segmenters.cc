// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sltkit/segmenters.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sltkit/errors.h"
#include "sltkit/io.h"

namespace slt {

namespace {

constexpr double kTimeEps = 1e-9;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ParameterError(std::string(name) + " must be positive");
  }
}

}  // namespace

std::vector<Span> gold_spans(const Talk& talk) {
  if (talk.gold.empty()) throw ValidationError("talk " + talk.id + ": gold segmentation unavailable");
  std::vector<Span> spans;
  spans.reserve(talk.gold.size());
  for (const auto& seg : talk.gold) spans.push_back({seg.start_s, seg.end_s, SpanKind::kGold});
  return spans;
}

std::vector<Span> fixed_spans(double duration_s, double window_s) {
  require_positive(window_s, "window");
  if (duration_s < 0.0) throw ParameterError("duration must be non-negative");
  std::vector<Span> spans;
  for (std::size_t k = 0;; ++k) {
    const double start = static_cast<double>(k) * window_s;
    if (start >= duration_s - kTimeEps) break;
    double end = static_cast<double>(k + 1) * window_s;
    if (end >= duration_s - kTimeEps) end = duration_s;
    spans.push_back({start, end, SpanKind::kFixed});
  }
  return spans;
}

std::vector<double> tick_times(double duration_s, double step_s) {
  require_positive(step_s, "tick");
  std::vector<double> ticks;
  if (duration_s <= 0.0) return ticks;
  for (std::size_t k = 1;; ++k) {
    const double t = static_cast<double>(k) * step_s;
    if (t >= duration_s - kTimeEps) break;
    ticks.push_back(t);
  }
  ticks.push_back(duration_s);
  return ticks;
}

std::vector<Span> sliding_spans(double duration_s, double window_s, double stride_s) {
  require_positive(window_s, "window");
  require_positive(stride_s, "stride");
  std::vector<Span> spans;
  for (double t : tick_times(duration_s, stride_s)) {
    spans.push_back({std::max(0.0, t - window_s), t, SpanKind::kSliding});
  }
  return spans;
}

std::vector<Span> prob_spans(const ProbabilityTrace& trace, const ProbSplitConfig& config) {
  validate(trace);
  if (trace.probs.empty()) throw ValidationError("trace: empty trace");
  require_positive(config.max_len_s, "max segment length");
  if (!(config.threshold > 0.0 && config.threshold <= 1.0)) throw ParameterError("threshold must be in (0,1]");
  if (config.min_len_s < 0.0) throw ParameterError("min segment length must be non-negative");
  const double fp = trace.frame_period_s;
  if (config.max_len_s + kTimeEps < fp) throw ParameterError("max segment length is shorter than one frame");

  const auto& probs = trace.probs;
  const std::size_t n = probs.size();
  auto frames_len = [fp](std::size_t count) { return static_cast<double>(count) * fp; };

  std::vector<Span> spans;
  auto close = [&](std::size_t begin, std::size_t end) {
    spans.push_back({frames_len(begin), frames_len(end), SpanKind::kProb});
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (probs[i] >= config.threshold && frames_len(i + 1 - start) >= config.min_len_s - kTimeEps) {
      close(start, i + 1);
      start = i = i + 1;
      continue;
    }
    if (i + 1 < n && frames_len(i + 2 - start) > config.max_len_s + kTimeEps) {
      std::size_t best = start;
      for (std::size_t f = start; f <= i; ++f) {
        if (probs[f] >= probs[best]) best = f;
      }
      close(start, best + 1);
      start = i = best + 1;
      continue;
    }
    ++i;
  }
  if (start < n) close(start, n);
  return spans;
}

std::vector<Span> fit_to_duration(std::vector<Span> spans, double duration_s) {
  std::erase_if(spans, [duration_s](const Span& s) { return s.start_s >= duration_s - kTimeEps; });
  if (!spans.empty()) spans.back().end_s = duration_s;
  return spans;
}

}  // namespace slt
