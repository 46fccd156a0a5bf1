// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

// Quality, flicker and delay of a display log against a talk's references.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "sltkit/bleu.h"
#include "sltkit/types.h"

namespace slt {

/// Finalization time of every token of the final output: the emit time of
/// the earliest update from which on all updates agree with the final output
/// on tokens 1..i. In legacy mode a token instead gets the first emit time at
/// which its type appears anywhere in an update, which mistimes repeated
/// words.
std::vector<double> finalization_times(const UpdateLog& log, bool legacy = false);

struct Flicker {
  std::size_t total = 0;
  double normalized = 0.0;
};

/// Tokens erased between consecutive updates, relative to their longest
/// common prefix; normalized by the final output length.
Flicker flicker(const UpdateLog& log);

/// Source time of every reference target token, concatenated over gold
/// segments: token j (1-based) of a segment [s, e) with n tokens gets
/// s + (j / n) (e - s).
std::vector<double> reference_times(const Talk& talk);

/// Per-token delay: finalization time minus the source time of the aligned
/// reference token. Hyp tokens left unaligned take the reference time of the
/// nearest aligned neighbour (the left one on ties).
std::vector<double> token_delays(const UpdateLog& log, const Talk& talk, bool legacy = false);

/// Mean of token_delays; 0 for an empty output. Throws ValidationError when
/// the talk has no gold segments.
double mean_delay(const UpdateLog& log, const Talk& talk, bool legacy = false);

struct MetricsReport {
  std::string talk_id;
  double bleu = 0.0;
  std::size_t flicker_total = 0;
  double flicker_normalized = 0.0;
  double mean_delay_s = 0.0;
  std::size_t token_count = 0;
  std::size_t update_count = 0;
  /// BLEU statistics of the resegmented output, for pooling across talks.
  BleuStats bleu_stats;
};

struct EvalOptions {
  bool legacy_delay = false;
};

/// Resegments the final output against the gold targets, then scores BLEU,
/// flicker and delay.
MetricsReport evaluate(const UpdateLog& log, const Talk& talk, const EvalOptions& options = {});

/// Pooled BLEU, summed counts, and flicker_norm / delay weighted by token
/// counts. talk_id is "TOTAL".
MetricsReport aggregate(const std::vector<MetricsReport>& reports);

/// CSV with header talk_id,bleu,flicker_total,flicker_norm,mean_delay_s,tokens,updates.
void write_report_csv(const std::vector<MetricsReport>& rows, std::ostream& out);

}  // namespace slt
