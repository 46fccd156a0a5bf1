// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <functional>

#include "sltkit/dataprep.h"
#include "sltkit/decoder.h"
#include "sltkit/errors.h"

using namespace slt;

namespace {

ToyLexiconScorer abc_lexicon(double eps, double flip = 0.0) {
  return ToyLexiconScorer({{"a", {"A", "A2"}}, {"b", {"B", "B2"}}, {"c", {"C", "C2"}}}, eps, flip);
}

// Prefix-dependent distributions over {x, y, z, END} drawn from a hash of the
// prefix; exercises ties and early END.
class HashScorer final : public Scorer {
 public:
  explicit HashScorer(std::uint64_t seed, bool coarse) : seed_(seed), coarse_(coarse) {}

  Distribution next_distribution(std::span<const std::string> source,
                                 std::span<const std::string> prefix) const override {
    std::uint64_t h = mix_hash(seed_, source.size());
    for (const auto& t : prefix) h = mix_hash(h, fnv1a(t));
    static const char* vocab[] = {"x", "y", "z"};
    Distribution d;
    double weights[4];
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      h = mix_hash(h, static_cast<std::uint64_t>(i));
      // Coarse weights make equal scores, and so tie-breaks, common.
      weights[i] = coarse_ ? 1.0 + std::floor(hash_unit(h) * 3.0) : 0.05 + hash_unit(h);
      sum += weights[i];
    }
    for (int i = 0; i < 3; ++i) d[vocab[i]] = weights[i] / sum;
    d[kEndToken] = 1.0 - (weights[0] + weights[1] + weights[2]) / sum;
    return d;
  }

 private:
  std::uint64_t seed_;
  bool coarse_;
};

struct Candidate {
  Tokens tokens;
  double log_prob;
};

// Every complete sequence up to max_len (sequences still open at max_len
// count as complete), best first by score, then length, then tokens.
Tokens exhaustive_best(const Scorer& scorer, std::span<const std::string> source, int max_len,
                       const Bias* bias = nullptr) {
  std::vector<Candidate> done;
  std::function<void(Tokens&, double, bool)> rec = [&](Tokens& prefix, double lp, bool following) {
    const auto t = prefix.size();
    if (static_cast<int>(t) == max_len) {
      done.push_back({prefix, lp});
      return;
    }
    auto p = scorer.next_distribution(source, prefix);
    if (bias && following && static_cast<std::ptrdiff_t>(t) < static_cast<std::ptrdiff_t>(bias->prefix.size()) - bias->mask_k) {
      p = bias_distribution(p, bias->prefix[t], bias->beta);
    }
    for (const auto& [tok, prob] : p) {
      if (prob <= 0.0) continue;
      if (tok == kEndToken) {
        done.push_back({prefix, lp + std::log(prob)});
        continue;
      }
      prefix.push_back(tok);
      rec(prefix, lp + std::log(prob), following && t < bias->prefix.size() && tok == bias->prefix[t]);
      prefix.pop_back();
    }
  };
  Tokens start;
  rec(start, 0.0, bias != nullptr && !bias->prefix.empty());
  const auto best = std::min_element(done.begin(), done.end(), [](const Candidate& a, const Candidate& b) {
    if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
    if (a.tokens.size() != b.tokens.size()) return a.tokens.size() < b.tokens.size();
    return a.tokens < b.tokens;
  });
  return best->tokens;
}

}  // namespace

TEST_CASE("toy lexicon distributions") {
  const auto s = abc_lexicon(0.3);
  const Tokens src{"a", "b"};
  const auto d0 = s.next_distribution(src, {});
  CHECK(d0.at("A") == doctest::Approx(0.7));
  CHECK(d0.at("A2") == doctest::Approx(0.3));
  const Tokens one{"A"};
  CHECK(s.next_distribution(src, one).count("B") == 1);
  const Tokens two{"A", "B"};
  CHECK(s.next_distribution(src, two) == Distribution{{kEndToken, 1.0}});
  const Tokens unk{"q"};
  CHECK(s.next_distribution(unk, {}).count("q'") == 1);
  CHECK_THROWS_AS(ToyLexiconScorer({}, 0.5), ParameterError);
  CHECK_THROWS_AS(ToyLexiconScorer({}, 0.1, 1.5), ParameterError);
}

TEST_CASE("plain beam search") {
  const Tokens src{"a", "b"};
  CHECK(beam_search(abc_lexicon(0.0), src, {4, 10}) == Tokens{"A", "B"});
  CHECK(beam_search(abc_lexicon(0.4), src, {2, 10}) == Tokens{"A", "B"});
  CHECK(beam_search(abc_lexicon(0.4), {}, {2, 10}).empty());
  CHECK_THROWS_AS(beam_search(abc_lexicon(0.4), src, {0, 10}), ParameterError);
  CHECK_THROWS_AS(beam_search(abc_lexicon(0.4), src, {2, 0}), ParameterError);
}

TEST_CASE("beam 1 is greedy decoding") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    HashScorer s(seed, seed % 2 == 0);
    const Tokens src{"a", "b", "c"};
    Tokens greedy;
    for (int step = 0; step < 6; ++step) {
      const auto d = s.next_distribution(src, greedy);
      const auto best = std::max_element(d.begin(), d.end(), [](const auto& x, const auto& y) {
        return x.second != y.second ? x.second < y.second : x.first > y.first;
      });
      if (best->first == kEndToken) break;
      greedy.push_back(best->first);
    }
    CHECK(beam_search(s, src, {1, 6}) == greedy);
  }
}

TEST_CASE("wide beam equals exhaustive search") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    HashScorer s(seed, seed % 3 == 0);
    const Tokens src{"a"};
    CHECK(beam_search(s, src, {200, 4}) == exhaustive_best(s, src, 4));
  }
}

TEST_CASE("beam 2 on short toy sources matches enumeration") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto s = abc_lexicon(rng.uniform(0.0, 0.49), rng.uniform());
    Tokens src;
    const int n = 1 + static_cast<int>(rng.uniform() * 3);
    for (int k = 0; k < n; ++k) src.push_back(std::string(1, static_cast<char>('a' + static_cast<int>(rng.uniform() * 3))));
    CHECK(beam_search(s, src, {2, 8}) == exhaustive_best(s, src, 8));
  }
}

TEST_CASE("bias arithmetic") {
  const Distribution p{{"A", 0.7}, {"A2", 0.3}};
  const auto q = bias_distribution(p, "A2", 0.25);
  CHECK(q.at("A") == doctest::Approx(0.525));
  CHECK(q.at("A2") == doctest::Approx(0.475));
  const auto r = bias_distribution(p, "Z", 0.25);
  CHECK(r.at("Z") == doctest::Approx(0.25));
  CHECK_NOTHROW(check_normalized(r));
  CHECK_THROWS_AS(check_normalized({{"a", 0.5}}), ContractError);
  CHECK_THROWS_AS(check_normalized({{"a", 1.5}, {"b", -0.5}}), ContractError);
}

TEST_CASE("bias hand trace on a 3-token source") {
  // eps 0.3, beta 0.25, prefix [A2 B C]:
  //   t0: A .525, A2 .475 (A2 biased)
  //   t1: A B .3675 vs A2 B .475 * .775 = .368125 (still following)
  //   t2: A2 B C = .368125 * .775 beats A B C = .3675 * .7
  const auto s = abc_lexicon(0.3);
  const Tokens src{"a", "b", "c"};
  CHECK(beam_search(s, src, {4, 10}) == Tokens{"A", "B", "C"});
  const Bias bias{{"A2", "B", "C"}, 0.25, 0};
  CHECK(biased_beam_search(s, src, bias, {4, 10}) == Tokens{"A2", "B", "C"});
  // Masking the last two prefix tokens leaves only t0 biased, which is not enough.
  const Bias masked{{"A2", "B", "C"}, 0.25, 2};
  CHECK(biased_beam_search(s, src, masked, {4, 10}) == Tokens{"A", "B", "C"});
}

TEST_CASE("beta 0 is plain beam search") {
  Rng rng(17);
  for (std::uint64_t i = 0; i < 300; ++i) {
    HashScorer s(i, i % 2 == 1);
    const Tokens src{"a", "b"};
    Tokens prefix;
    for (int k = 0; k < 4; ++k) prefix.push_back(rng.uniform() < 0.5 ? "x" : "z");
    const Bias bias{prefix, 0.0, static_cast<int>(rng.uniform() * 3)};
    CHECK(biased_beam_search(s, src, bias, {3, 5}) == beam_search(s, src, {3, 5}));
  }
}

TEST_CASE("beta 1 forces the prefix") {
  const auto s = abc_lexicon(0.4, 0.5);
  const Tokens src{"a", "b", "c", "a"};
  const Bias bias{{"A2", "B2", "C"}, 1.0, 0};
  const auto out = biased_beam_search(s, src, bias, {2, 10});
  REQUIRE(out.size() >= 3);
  CHECK(Tokens(out.begin(), out.begin() + 3) == bias.prefix);
  // Prefix entirely under the mask: no bias at all.
  const Bias hidden{{"A2", "B2", "C2"}, 1.0, 5};
  CHECK(biased_beam_search(s, src, hidden, {2, 10}) == beam_search(s, src, {2, 10}));
}

TEST_CASE("biased search matches biased enumeration") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    HashScorer s(i + 1000, i % 2 == 0);
    const Tokens src{"a"};
    const Bias bias{{"y", "x", "z"}, 0.25 * static_cast<double>(i % 5), static_cast<int>(i % 3)};
    CHECK(biased_beam_search(s, src, bias, {300, 4}) == exhaustive_best(s, src, 4, &bias));
  }
}

TEST_CASE("unnormalized scorer is a contract error") {
  class Bad final : public Scorer {
   public:
    Distribution next_distribution(std::span<const std::string>, std::span<const std::string>) const override {
      return {{"a", 0.6}, {kEndToken, 0.6}};
    }
  };
  CHECK_THROWS_AS(beam_search(Bad{}, {}, {2, 3}), ContractError);
}

TEST_CASE("output mask") {
  const Tokens abc{"a", "b", "c"};
  CHECK(apply_output_mask(abc, 0) == abc);
  CHECK(apply_output_mask(abc, 2) == Tokens{"a"});
  CHECK(apply_output_mask(abc, 7).empty());
}

TEST_CASE("lexicon files") {
  const auto lex = read_lexicon(std::string(SLTKIT_TEST_DATA) + "/plain.lex");
  CHECK(lex->eps() == doctest::Approx(0.3));
  CHECK(lex->flip_rate() == 0.0);
  CHECK(lex->lookup("kleiner").primary == "small");
  const auto unstable = read_lexicon(std::string(SLTKIT_TEST_DATA) + "/unstable.lex");
  CHECK(unstable->eps() == doctest::Approx(0.4));
  CHECK(unstable->flip_rate() == doctest::Approx(0.3));
  CHECK_THROWS(read_lexicon("/nonexistent.lex"));
}

TEST_CASE("beam translator") {
  BeamTranslator t(std::make_shared<ToyLexiconScorer>(abc_lexicon(0.3)), {4, 10});
  TranslationRequest req;
  req.id = 4;
  req.source = {"a", "b", "c"};
  CHECK(t.translate(req).target == Tokens{"A", "B", "C"});
  req.bias = Bias{{"A2", "B", "C"}, 0.25, 0};
  CHECK(t.translate(req).target == Tokens{"A2", "B", "C"});
  CHECK(t.translate(req).id == 4);
}
