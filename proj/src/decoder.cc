// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sltkit/decoder.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sltkit/errors.h"

namespace slt {

// ---------------------------------------------------------------------------
// ToyLexiconScorer

ToyLexiconScorer::ToyLexiconScorer(std::unordered_map<std::string, Entry> lexicon, double eps, double flip_rate)
    : lexicon_(std::move(lexicon)), eps_(eps), flip_rate_(flip_rate) {
  if (!(eps >= 0.0 && eps < 0.5)) throw ParameterError("lexicon eps must be in [0, 0.5)");
  if (!(flip_rate >= 0.0 && flip_rate <= 1.0)) throw ParameterError("lexicon flip rate must be in [0, 1]");
}

ToyLexiconScorer::Entry ToyLexiconScorer::lookup(const std::string& word) const {
  if (auto it = lexicon_.find(word); it != lexicon_.end()) return it->second;
  return {word, word + "'"};
}

bool ToyLexiconScorer::flipped(const std::string& word, std::size_t position, std::size_t source_length) const {
  if (flip_rate_ <= 0.0) return false;
  return hash_unit(mix_hash(mix_hash(fnv1a(word), position), source_length)) < flip_rate_;
}

Distribution ToyLexiconScorer::next_distribution(std::span<const std::string> source,
                                                 std::span<const std::string> target_prefix) const {
  const std::size_t pos = target_prefix.size();
  if (pos >= source.size()) return {{kEndToken, 1.0}};
  const auto& word = source[pos];
  const auto entry = lookup(word);
  double primary = 1.0 - eps_;
  double alternate = eps_;
  if (flipped(word, pos, source.size())) std::swap(primary, alternate);
  if (entry.primary == entry.alternate) return {{entry.primary, 1.0}};
  Distribution dist;
  if (primary > 0.0) dist[entry.primary] = primary;
  if (alternate > 0.0) dist[entry.alternate] = alternate;
  return dist;
}

std::unique_ptr<ToyLexiconScorer> read_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon " + path);
  std::unordered_map<std::string, ToyLexiconScorer::Entry> lexicon;
  double eps = 0.3;
  double flip = 0.0;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto fields = tokenize(raw);
    if (fields.empty()) continue;
    if (fields[0] == "#eps" || fields[0] == "#flip") {
      if (fields.size() != 2) throw ParseError(path, lineno, "expected '" + fields[0] + " <value>'");
      double value = 0.0;
      try {
        std::size_t used = 0;
        value = std::stod(fields[1], &used);
        if (used != fields[1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(path, lineno, "bad number '" + fields[1] + "'");
      }
      (fields[0] == "#eps" ? eps : flip) = value;
      continue;
    }
    if (fields[0].front() == '#') continue;
    if (fields.size() != 3) throw ParseError(path, lineno, "expected 'source<TAB>primary<TAB>alternate'");
    lexicon[fields[0]] = {fields[1], fields[2]};
  }
  return std::make_unique<ToyLexiconScorer>(std::move(lexicon), eps, flip);
}

// ---------------------------------------------------------------------------
// Search

void check_normalized(const Distribution& p) {
  double sum = 0.0;
  for (const auto& [tok, prob] : p) {
    if (!(prob >= 0.0) || !std::isfinite(prob)) throw ContractError("scorer returned a negative or non-finite probability for '" + tok + "'");
    sum += prob;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ContractError("scorer distribution sums to " + std::to_string(sum) + ", not 1");
}

Distribution bias_distribution(const Distribution& p, const std::string& token, double beta) {
  Distribution out;
  for (const auto& [tok, prob] : p) out[tok] = (1.0 - beta) * prob;
  out[token] += beta;
  return out;
}

Tokens apply_output_mask(const Tokens& tokens, std::size_t k) {
  const std::size_t keep = tokens.size() - std::min(k, tokens.size());
  return Tokens(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(keep));
}

namespace {

struct Hypothesis {
  Tokens tokens;
  double log_prob = 0.0;
  bool following_prefix = false;
  bool finished = false;
};

// Higher score first; equal scores prefer the shorter (earlier-finished)
// sequence, then the lexicographically smaller one.
bool better(const Hypothesis& a, const Hypothesis& b) {
  if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
  if (a.tokens.size() != b.tokens.size()) return a.tokens.size() < b.tokens.size();
  return a.tokens < b.tokens;
}

Tokens search(const Scorer& scorer, std::span<const std::string> source, const Bias* bias,
              const BeamOptions& options) {
  if (options.beam_size < 1) throw ParameterError("beam size must be at least 1");
  if (options.max_len < 1) throw ParameterError("max length must be at least 1");
  if (bias) {
    if (!(bias->beta >= 0.0 && bias->beta <= 1.0)) throw ParameterError("bias beta must be in [0, 1]");
    if (bias->mask_k < 0) throw ParameterError("bias mask must be non-negative");
  }
  const auto beam = static_cast<std::size_t>(options.beam_size);
  // Positions below this index are biased for hypotheses still on the prefix.
  const std::ptrdiff_t biased_until =
      bias ? static_cast<std::ptrdiff_t>(bias->prefix.size()) - bias->mask_k : 0;

  std::vector<Hypothesis> live(1);
  live.front().following_prefix = bias && !bias->prefix.empty();
  std::vector<Hypothesis> finished;
  bool settled = false;

  for (int step = 0; step < options.max_len && !live.empty(); ++step) {
    const auto t = static_cast<std::size_t>(step);
    std::vector<Hypothesis> candidates;
    for (const auto& hyp : live) {
      Distribution p = scorer.next_distribution(source, hyp.tokens);
      check_normalized(p);
      if (bias && hyp.following_prefix && static_cast<std::ptrdiff_t>(t) < biased_until) {
        p = bias_distribution(p, bias->prefix[t], bias->beta);
      }
      for (const auto& [tok, prob] : p) {
        if (prob <= 0.0) continue;
        Hypothesis next = hyp;
        next.log_prob += std::log(prob);
        if (tok == kEndToken) {
          next.finished = true;
        } else {
          next.tokens.push_back(tok);
          next.following_prefix = hyp.following_prefix && t < bias->prefix.size() && tok == bias->prefix[t];
        }
        candidates.push_back(std::move(next));
      }
    }
    const std::size_t keep = std::min(beam, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                      better);
    candidates.resize(keep);

    live.clear();
    for (auto& c : candidates) (c.finished ? finished : live).push_back(std::move(c));

    // Scores never increase, so no live hypothesis can overtake the best finished one.
    if (!finished.empty() && !live.empty()) {
      const auto best_done = std::min_element(finished.begin(), finished.end(), better);
      const auto best_live = std::min_element(live.begin(), live.end(), better);
      if (best_done->log_prob >= best_live->log_prob) {
        settled = true;
        break;
      }
    }
  }
  if (!settled) {
    for (auto& hyp : live) finished.push_back(std::move(hyp));  // reached max_len
  }
  if (finished.empty()) return {};
  return std::min_element(finished.begin(), finished.end(), better)->tokens;
}

}  // namespace

Tokens beam_search(const Scorer& scorer, std::span<const std::string> source, const BeamOptions& options) {
  return search(scorer, source, nullptr, options);
}

Tokens biased_beam_search(const Scorer& scorer, std::span<const std::string> source, const Bias& bias,
                          const BeamOptions& options) {
  return search(scorer, source, &bias, options);
}

TranslationResponse BeamTranslator::translate(const TranslationRequest& request) {
  TranslationResponse resp;
  resp.id = request.id;
  resp.target = request.bias ? biased_beam_search(*scorer_, request.source, *request.bias, options_)
                             : beam_search(*scorer_, request.source, options_);
  return resp;
}

}  // namespace slt
