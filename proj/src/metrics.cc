// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sltkit/metrics.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include "sltkit/edit_distance.h"
#include "sltkit/errors.h"
#include "sltkit/io.h"
#include "sltkit/orchestrator.h"

namespace slt {

std::vector<double> finalization_times(const UpdateLog& log, bool legacy) {
  validate(log);
  const auto& ups = log.updates;
  const Tokens& final_tokens = log.final_tokens();
  std::vector<double> times(final_tokens.size());

  if (legacy) {
    std::map<std::string, double> first_seen;
    for (const auto& u : ups) {
      for (const auto& tok : u.tokens) first_seen.try_emplace(tok, u.emit_s);
    }
    for (std::size_t i = 0; i < final_tokens.size(); ++i) times[i] = first_seen.at(final_tokens[i]);
    return times;
  }

  // agreed[u]: number of leading final tokens that update u and every later
  // update reproduce. Non-decreasing in u, and full at the final update.
  std::vector<std::size_t> agreed(ups.size());
  std::size_t running = final_tokens.size();
  for (std::size_t u = ups.size(); u-- > 0;) {
    running = std::min(running, common_prefix_length(ups[u].tokens, final_tokens));
    agreed[u] = running;
  }
  std::size_t u = 0;
  for (std::size_t i = 0; i < final_tokens.size(); ++i) {
    while (agreed[u] < i + 1) ++u;
    times[i] = ups[u].emit_s;
  }
  return times;
}

Flicker flicker(const UpdateLog& log) {
  validate(log);
  Flicker f;
  for (std::size_t u = 1; u < log.updates.size(); ++u) {
    const auto& prev = log.updates[u - 1].tokens;
    f.total += prev.size() - common_prefix_length(prev, log.updates[u].tokens);
  }
  const std::size_t n = log.final_tokens().size();
  f.normalized = n == 0 ? 0.0 : static_cast<double>(f.total) / static_cast<double>(n);
  return f;
}

std::vector<double> reference_times(const Talk& talk) {
  std::vector<double> times;
  for (const auto& seg : talk.gold) {
    const auto n = seg.target_text.size();
    for (std::size_t j = 1; j <= n; ++j) {
      times.push_back(seg.start_s + (static_cast<double>(j) / static_cast<double>(n)) * seg.duration());
    }
  }
  return times;
}

namespace {

Tokens gold_target(const Talk& talk) {
  Tokens ref;
  for (const auto& seg : talk.gold) ref.insert(ref.end(), seg.target_text.begin(), seg.target_text.end());
  return ref;
}

}  // namespace

std::vector<double> token_delays(const UpdateLog& log, const Talk& talk, bool legacy) {
  if (talk.gold.empty()) throw ValidationError("talk " + talk.id + ": delay requires reference timing");
  const auto fin = finalization_times(log, legacy);
  const Tokens& hyp = log.final_tokens();
  if (hyp.empty()) return {};
  const Tokens ref = gold_target(talk);
  if (ref.empty()) throw ValidationError("talk " + talk.id + ": delay requires reference timing (empty gold targets)");
  const auto ref_times = reference_times(talk);
  const auto links = align(hyp, ref);

  const std::size_t n = hyp.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  // Nearest aligned position to the left and to the right of each token.
  std::vector<std::size_t> left(n, kNone);
  std::vector<std::size_t> right(n, kNone);
  for (std::size_t i = 0, last = kNone; i < n; ++i) {
    if (links[i]) last = i;
    left[i] = last;
  }
  for (std::size_t i = n, last = kNone; i-- > 0;) {
    if (links[i]) last = i;
    right[i] = last;
  }

  std::vector<double> delays(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t src = left[i];
    if (src == kNone || (right[i] != kNone && right[i] - i < i - left[i])) src = right[i];
    if (src == kNone) throw ValidationError("talk " + talk.id + ": no output token aligns to the reference");
    delays[i] = fin[i] - ref_times[*links[src]];
  }
  return delays;
}

double mean_delay(const UpdateLog& log, const Talk& talk, bool legacy) {
  const auto d = token_delays(log, talk, legacy);
  if (d.empty()) return 0.0;
  double sum = 0.0;
  for (double x : d) sum += x;
  return sum / static_cast<double>(d.size());
}

MetricsReport evaluate(const UpdateLog& log, const Talk& talk, const EvalOptions& options) {
  validate(log);
  if (talk.gold.empty()) throw ValidationError("talk " + talk.id + ": evaluation requires gold segments");
  MetricsReport r;
  r.talk_id = talk.id;
  const Tokens& hyp = log.final_tokens();

  std::vector<Tokens> refs;
  refs.reserve(talk.gold.size());
  for (const auto& seg : talk.gold) refs.push_back(seg.target_text);
  const auto spans = resegment(hyp, refs).spans(hyp);
  for (std::size_t i = 0; i < refs.size(); ++i) r.bleu_stats += segment_stats(spans[i], refs[i]);
  r.bleu = bleu(r.bleu_stats);

  const auto f = flicker(log);
  r.flicker_total = f.total;
  r.flicker_normalized = f.normalized;
  r.mean_delay_s = mean_delay(log, talk, options.legacy_delay);
  r.token_count = hyp.size();
  r.update_count = log.updates.size();
  return r;
}

MetricsReport aggregate(const std::vector<MetricsReport>& reports) {
  MetricsReport t;
  t.talk_id = "TOTAL";
  double delay_sum = 0.0;
  for (const auto& r : reports) {
    t.bleu_stats += r.bleu_stats;
    t.flicker_total += r.flicker_total;
    t.token_count += r.token_count;
    t.update_count += r.update_count;
    delay_sum += r.mean_delay_s * static_cast<double>(r.token_count);
  }
  t.bleu = bleu(t.bleu_stats);
  if (t.token_count > 0) {
    const double n = static_cast<double>(t.token_count);
    t.flicker_normalized = static_cast<double>(t.flicker_total) / n;
    t.mean_delay_s = delay_sum / n;
  }
  return t;
}

void write_report_csv(const std::vector<MetricsReport>& rows, std::ostream& out) {
  out << "talk_id,bleu,flicker_total,flicker_norm,mean_delay_s,tokens,updates\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%.4f,%zu,%.6f,%.6f,%zu,%zu\n", r.bleu, r.flicker_total, r.flicker_normalized,
                  r.mean_delay_s, r.token_count, r.update_count);
    out << r.talk_id << buf;
  }
}

}  // namespace slt
