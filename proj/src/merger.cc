// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sltkit/merger.h"

#include <algorithm>
#include <cmath>

#include "sltkit/decoder.h"
#include "sltkit/errors.h"
#include "sltkit/segmenters.h"

namespace slt {

void validate(const MergeConfig& config) {
  if (!(config.tau > 0.0 && config.tau <= 1.0)) throw ParameterError("tau must be in (0, 1]");
  if (!(config.backtrack_step_s > 0.0)) throw ParameterError("backtrack step must be positive");
  if (config.max_backtracks < 0) throw ParameterError("max backtracks must be non-negative");
  if (config.last_min_len < 1) throw ParameterError("last-mode minimum length must be at least 1");
}

std::vector<Match> common_substrings(std::span<const std::string> output, std::span<const std::string> window) {
  std::vector<Match> matches;
  const std::size_t n = output.size();
  const std::size_t m = window.size();
  // run[j] holds the common suffix length of output[..i] and window[..j].
  std::vector<std::size_t> prev(m + 1, 0);
  std::vector<std::size_t> cur(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = output[i - 1] == window[j - 1] ? prev[j - 1] + 1 : 0;
      // A run is maximal once it cannot be extended to the right.
      const bool extends = i < n && j < m && output[i] == window[j];
      if (cur[j] > 0 && !extends) matches.push_back({i - cur[j], j - cur[j], cur[j]});
    }
    std::swap(prev, cur);
  }
  std::sort(matches.begin(), matches.end(), [](const Match& a, const Match& b) {
    return std::tie(a.output_start, a.window_start) < std::tie(b.output_start, b.window_start);
  });
  return matches;
}

std::optional<Match> select_match(std::span<const Match> matches, MergeMode mode, const MergeConfig& config) {
  std::optional<Match> best;
  for (const auto& m : matches) {
    if (mode == MergeMode::kLast && m.length < config.last_min_len) continue;
    if (!best) {
      best = m;
      continue;
    }
    const auto key = [mode](const Match& x) {
      return mode == MergeMode::kLongest ? std::tuple(x.length, x.output_start, x.window_start)
                                         : std::tuple(x.output_start, x.length, x.window_start);
    };
    if (key(m) > key(*best)) best = m;
  }
  return best;
}

Tokens splice(std::span<const std::string> output, std::span<const std::string> window, const Match& match) {
  Tokens out(output.begin(), output.begin() + static_cast<std::ptrdiff_t>(match.output_start));
  out.insert(out.end(), window.begin() + static_cast<std::ptrdiff_t>(match.window_start), window.end());
  return out;
}

MergeResult merge_step(const MergeState& state, std::span<const std::string> window, const MergeConfig& config) {
  validate(config);
  if (window.empty()) return Merged{state.output, Match{state.output.size(), 0, 0}};
  if (state.output.empty()) return ForcedMerge{Tokens(window.begin(), window.end()), std::nullopt};

  const auto matches = common_substrings(state.output, window);
  const double threshold = static_cast<double>(window.size()) * config.tau;
  const auto chosen = select_match(matches, config.mode, config);
  if (chosen && static_cast<double>(chosen->length) >= threshold) {
    return Merged{splice(state.output, window, *chosen), *chosen};
  }
  if (state.backtracks_used < config.max_backtracks) return NeedBacktrack{};

  auto fallback = chosen;
  if (!fallback) fallback = select_match(matches, MergeMode::kLongest, config);
  if (!fallback) {
    Tokens out = state.output;
    out.insert(out.end(), window.begin(), window.end());
    return ForcedMerge{std::move(out), std::nullopt};
  }
  return ForcedMerge{splice(state.output, window, *fallback), fallback};
}

UpdateLog run_merging_translation(const Talk& talk, Translator& translator, const MergeConfig& config,
                                  const MergingRunOptions& options, MergeStats* stats) {
  validate(config);
  if (!(options.window_s > 0.0)) throw ParameterError("window must be positive");
  if (!(options.stride_s > 0.0)) throw ParameterError("stride must be positive");

  MergeStats local;
  MergeStats& st = stats ? *stats : local;
  UpdateLog log;
  log.talk_id = talk.id;
  MergeState state;
  std::int64_t next_id = 0;

  const auto spans = sliding_spans(talk.duration_s, options.window_s, options.stride_s);
  for (std::size_t w = 0; w < spans.size(); ++w) {
    const Span& span = spans[w];
    ++st.windows;
    std::size_t calls = 0;
    state.backtracks_used = 0;
    double start = span.start_s;
    std::size_t uncommitted_from = state.output.size();

    while (true) {
      auto request = make_request(talk, next_id++, start, span.end_s);
      request.span.kind = SpanKind::kSliding;
      const auto response = translator.translate(request);
      ++calls;
      ++st.translator_calls;

      const auto result = merge_step(state, response.target, config);
      if (std::holds_alternative<NeedBacktrack>(result)) {
        ++state.backtracks_used;
        ++st.backtracks;
        const double widened = std::max(0.0, span.start_s - config.backtrack_step_s * state.backtracks_used);
        if (widened < start) {
          start = widened;
          continue;
        }
        // The window already reaches the talk start: retranslating would
        // return the same tokens, so exhaust the backtracks here.
        state.backtracks_used = config.max_backtracks;
        const auto forced = merge_step(state, response.target, config);
        const auto& fm = std::get<ForcedMerge>(forced);
        uncommitted_from = fm.match ? fm.match->output_start : state.output.size();
        state.output = fm.output;
        ++st.forced_merges;
        break;
      }
      if (const auto* m = std::get_if<Merged>(&result)) {
        uncommitted_from = std::min(m->match.output_start, state.output.size());
        state.output = m->output;
      } else {
        const auto& fm = std::get<ForcedMerge>(result);
        uncommitted_from = fm.match ? fm.match->output_start : state.output.size();
        state.output = fm.output;
        if (state.backtracks_used > 0 || fm.match) ++st.forced_merges;
      }
      break;
    }
    st.max_calls_per_window = std::max(st.max_calls_per_window, calls);
    state.committed = uncommitted_from;

    const bool last = w + 1 == spans.size();
    DisplayUpdate update;
    update.emit_s = span.end_s;
    update.kind = last ? UpdateKind::kComplete : UpdateKind::kPartial;
    if (last) {
      update.tokens = state.output;
    } else {
      const std::size_t n = state.output.size();
      const std::size_t keep = std::max(uncommitted_from, n - std::min(options.output_mask_k, n));
      update.tokens.assign(state.output.begin(), state.output.begin() + static_cast<std::ptrdiff_t>(std::min(keep, n)));
    }
    log.updates.push_back(std::move(update));
  }
  return log;
}

}  // namespace slt
