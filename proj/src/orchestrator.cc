// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sltkit/orchestrator.h"

#include <algorithm>
#include <cmath>

#include "sltkit/decoder.h"
#include "sltkit/errors.h"
#include "sltkit/io.h"

namespace slt {

namespace {

constexpr double kTickEps = 1e-9;

}  // namespace

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kGold: return "gold";
    case Strategy::kProb: return "prob";
    case Strategy::kFixed: return "fixed";
    case Strategy::kMerged: return "merged";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
  for (auto s : {Strategy::kGold, Strategy::kProb, Strategy::kFixed, Strategy::kMerged}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

void validate(const RunConfig& config) {
  if (!(config.tick_s > 0.0)) throw ParameterError("tick must be positive");
  if (!(config.fixed_window_s > 0.0)) throw ParameterError("fixed window must be positive");
  if (!(config.sliding_window_s > 0.0)) throw ParameterError("sliding window must be positive");
  if (!(config.stride_s > 0.0)) throw ParameterError("stride must be positive");
  if (config.bias) {
    if (config.strategy == Strategy::kMerged) {
      throw ParameterError("biased decoding cannot be combined with the merged strategy");
    }
    if (!(config.bias->beta >= 0.0 && config.bias->beta <= 1.0)) throw ParameterError("bias beta must be in [0, 1]");
    if (config.bias->mask_k < 0) throw ParameterError("bias mask must be non-negative");
  }
  validate(config.merge);
}

std::vector<Span> strategy_spans(const Talk& talk, const RunConfig& config, const ProbabilityTrace* trace) {
  switch (config.strategy) {
    case Strategy::kGold: return gold_spans(talk);
    case Strategy::kFixed: return fixed_spans(talk.duration_s, config.fixed_window_s);
    case Strategy::kProb:
      if (!trace) throw ParameterError("the prob strategy needs a probability trace");
      return fit_to_duration(prob_spans(*trace, config.prob), talk.duration_s);
    case Strategy::kMerged: return {};
  }
  return {};
}

std::size_t common_prefix_length(std::span<const std::string> a, std::span<const std::string> b) {
  const auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  (void)ib;
  return static_cast<std::size_t>(ia - a.begin());
}

std::vector<std::size_t> finalized_prefix(const UpdateLog& log) {
  const auto& ups = log.updates;
  std::vector<std::size_t> out(ups.size());
  std::size_t running = 0;
  for (std::size_t i = ups.size(); i-- > 0;) {
    if (i + 1 == ups.size()) {
      running = ups[i].tokens.size();
    } else {
      // Shared with all later updates = shared with the next one, capped by
      // what the next one shares with everything after it.
      running = std::min(running, common_prefix_length(ups[i].tokens, ups[i + 1].tokens));
    }
    out[i] = std::min(running, ups[i].tokens.size());
  }
  return out;
}

namespace {

class TalkRunner {
 public:
  TalkRunner(const Talk& talk, const RunConfig& config, Translator& translator)
      : talk_(talk), config_(config), translator_(translator) {}

  Tokens translate(double start, double end, const Tokens* previous, double tick) {
    std::optional<Bias> bias;
    if (config_.bias && previous) bias = Bias{*previous, config_.bias->beta, config_.bias->mask_k};
    auto request = make_request(talk_, next_id_++, start, end, std::move(bias));
    try {
      return translator_.translate(request).target;
    } catch (const TimeoutError& e) {
      throw TimeoutError(e.request_id(), "talk " + talk_.id + " at tick " + format_seconds(tick) + ": " + e.detail());
    } catch (const TransportError& e) {
      throw TransportError(e.request_id(), "talk " + talk_.id + " at tick " + format_seconds(tick) + ": " + e.detail());
    }
  }

 private:
  const Talk& talk_;
  const RunConfig& config_;
  Translator& translator_;
  std::int64_t next_id_ = 0;
};

}  // namespace

UpdateLog run_talk(const Talk& talk, const RunConfig& config, Translator& translator, const ProbabilityTrace* trace) {
  validate(config);
  if (config.strategy == Strategy::kMerged) {
    return run_merging_translation(talk, translator, config.merge,
                                   {config.sliding_window_s, config.stride_s, config.output_mask_k});
  }

  const auto spans = strategy_spans(talk, config, trace);
  TalkRunner runner(talk, config, translator);
  UpdateLog log;
  log.talk_id = talk.id;

  Tokens finalized;                  // concatenated translations of finished spans
  std::size_t next_span = 0;         // first span not yet finalized
  std::optional<Tokens> partial;     // last partial translation of spans[next_span]

  const auto ticks = tick_times(talk.duration_s, config.tick_s);
  for (std::size_t k = 0; k < ticks.size(); ++k) {
    const double t = ticks[k];
    const bool last = k + 1 == ticks.size();

    while (next_span < spans.size() && spans[next_span].end_s <= t + kTickEps) {
      const Span& s = spans[next_span];
      const auto full = runner.translate(s.start_s, s.end_s, partial ? &*partial : nullptr, t);
      finalized.insert(finalized.end(), full.begin(), full.end());
      partial.reset();
      ++next_span;
    }

    DisplayUpdate update;
    update.emit_s = t;
    update.tokens = finalized;
    if (last) {
      update.kind = UpdateKind::kComplete;
    } else {
      update.kind = UpdateKind::kPartial;
      if (next_span < spans.size() && spans[next_span].start_s < t - kTickEps) {
        const Span& s = spans[next_span];
        partial = runner.translate(s.start_s, t, partial ? &*partial : nullptr, t);
        const auto shown = apply_output_mask(*partial, config.output_mask_k);
        update.tokens.insert(update.tokens.end(), shown.begin(), shown.end());
      }
    }
    log.updates.push_back(std::move(update));
  }
  return log;
}

}  // namespace slt
