// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

// Beam search over an abstract next-token scorer, with the prefix-biased
// variant used to stabilise retranslation and the right-truncating output
// mask.

#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>

#include "sltkit/translator.h"
#include "sltkit/types.h"

namespace slt {

/// Token that ends a hypothesis. Never part of returned outputs.
inline const std::string kEndToken = "</s>";

/// Probability of each next token. Ordered so that iteration, and therefore
/// every tie-break downstream, is deterministic.
using Distribution = std::map<std::string, double>;

class Scorer {
 public:
  virtual ~Scorer() = default;
  /// Must sum to 1 within 1e-9 and be a pure function of its arguments.
  virtual Distribution next_distribution(std::span<const std::string> source,
                                         std::span<const std::string> target_prefix) const = 0;
};

/// Word-for-word scorer: at target position i < |source| the primary
/// translation of source[i] gets 1 - eps and its alternate eps; at position
/// |source| END is certain.
///
/// With flip_rate > 0 the two masses trade places at a position whenever a
/// hash of (source word, position, source length) falls below flip_rate. The
/// preferred word then changes as the source grows, which is the instability
/// retranslation exhibits. flip_rate = 0 gives the plain lexicon.
class ToyLexiconScorer final : public Scorer {
 public:
  struct Entry {
    std::string primary;
    std::string alternate;
  };

  ToyLexiconScorer(std::unordered_map<std::string, Entry> lexicon, double eps, double flip_rate = 0.0);

  Distribution next_distribution(std::span<const std::string> source,
                                 std::span<const std::string> target_prefix) const override;

  /// Unknown words translate to themselves, with "<word>'" as alternate.
  Entry lookup(const std::string& word) const;
  /// Whether position i of a source with the given length is flipped.
  bool flipped(const std::string& word, std::size_t position, std::size_t source_length) const;

  double eps() const { return eps_; }
  double flip_rate() const { return flip_rate_; }

 private:
  std::unordered_map<std::string, Entry> lexicon_;
  double eps_;
  double flip_rate_;
};

/// Reads a lexicon file: `src<TAB>primary<TAB>alternate` lines plus optional
/// `#eps <value>` and `#flip <value>` directives (defaults 0.3 and 0).
std::unique_ptr<ToyLexiconScorer> read_lexicon(const std::string& path);

struct BeamOptions {
  int beam_size = 4;
  int max_len = 256;
};

/// Highest log-probability complete hypothesis. Each step keeps the
/// beam_size best expansions (END expansions included); ties prefer the
/// lexicographically smaller token sequence. Among finished hypotheses ties go
/// to the earliest completion, then lexicographic order. Hypotheses that reach
/// max_len without END are treated as complete.
Tokens beam_search(const Scorer& scorer, std::span<const std::string> source, const BeamOptions& options);

/// Beam search whose step distribution for a hypothesis that still follows
/// bias.prefix, at position t < |prefix| - mask_k, is
///   p'(y) = (1 - beta) p(y) + beta [y == prefix[t]].
/// A hypothesis stops following the prefix at its first deviating token.
Tokens biased_beam_search(const Scorer& scorer, std::span<const std::string> source, const Bias& bias,
                          const BeamOptions& options);

/// The interpolation step on its own: (1 - beta) p + beta * point_mass(token).
Distribution bias_distribution(const Distribution& p, const std::string& token, double beta);

/// Drops the last min(k, |tokens|) tokens.
Tokens apply_output_mask(const Tokens& tokens, std::size_t k);

/// Throws ContractError unless p is a probability distribution within 1e-9.
void check_normalized(const Distribution& p);

/// Translator backend running (biased) beam search over a scorer. Requests
/// carrying bias use biased_beam_search.
class BeamTranslator final : public Translator {
 public:
  BeamTranslator(std::shared_ptr<const Scorer> scorer, BeamOptions options)
      : scorer_(std::move(scorer)), options_(options) {}

  TranslationResponse translate(const TranslationRequest& request) override;

 private:
  std::shared_ptr<const Scorer> scorer_;
  BeamOptions options_;
};

}  // namespace slt
