// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sltkit/bleu.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "sltkit/errors.h"

namespace slt {

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (int n = 0; n < kBleuMaxOrder; ++n) {
    matches[n] += other.matches[n];
    totals[n] += other.totals[n];
  }
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  return *this;
}

namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> count_ngrams(std::span<const std::string> tokens, std::size_t n) {
  std::map<Ngram, std::size_t> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Ngram(tokens.begin() + static_cast<std::ptrdiff_t>(i), tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

}  // namespace

BleuStats segment_stats(std::span<const std::string> hyp, std::span<const std::string> ref) {
  BleuStats s;
  s.hyp_len = hyp.size();
  s.ref_len = ref.size();
  for (int order = 1; order <= kBleuMaxOrder; ++order) {
    const auto n = static_cast<std::size_t>(order);
    const auto h = count_ngrams(hyp, n);
    const auto r = count_ngrams(ref, n);
    for (const auto& [gram, count] : h) {
      if (auto it = r.find(gram); it != r.end()) s.matches[n - 1] += std::min(count, it->second);
    }
    s.totals[n - 1] = hyp.size() >= n ? hyp.size() - n + 1 : 0;
  }
  return s;
}

double bleu(const BleuStats& stats) {
  if (stats.hyp_len == 0) return 0.0;
  double log_sum = 0.0;
  for (int n = 0; n < kBleuMaxOrder; ++n) {
    if (stats.totals[n] == 0) return 0.0;
    const double total = static_cast<double>(stats.totals[n]);
    const double matched = stats.matches[n] == 0 ? kBleuFloor : static_cast<double>(stats.matches[n]);
    log_sum += std::log(matched / total);
  }
  const double c = static_cast<double>(stats.hyp_len);
  const double r = static_cast<double>(stats.ref_len);
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return 100.0 * bp * std::exp(log_sum / kBleuMaxOrder);
}

double corpus_bleu(std::span<const Tokens> hyps, std::span<const Tokens> refs) {
  if (hyps.size() != refs.size()) throw ParameterError("hypothesis and reference segment counts differ");
  BleuStats total;
  for (std::size_t i = 0; i < hyps.size(); ++i) total += segment_stats(hyps[i], refs[i]);
  return bleu(total);
}

}  // namespace slt
