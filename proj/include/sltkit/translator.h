// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sltkit/types.h"

namespace slt {

/// Prefix-bias parameters for biased beam search.
struct Bias {
  Tokens prefix;
  double beta = 0.25;
  int mask_k = 5;

  bool operator==(const Bias&) const = default;
};

struct TranslationRequest {
  std::int64_t id = 0;
  Tokens source;
  Span span;
  std::optional<Bias> bias;

  bool operator==(const TranslationRequest&) const = default;
};

struct TranslationResponse {
  std::int64_t id = 0;
  Tokens target;

  bool operator==(const TranslationResponse&) const = default;
};

/// Anything that turns a source span into target tokens. Implementations are
/// used by one pipeline at a time; they need not be thread-safe.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual TranslationResponse translate(const TranslationRequest& request) = 0;
};

/// Builds the request for [start_s, end_s) of a talk.
TranslationRequest make_request(const Talk& talk, std::int64_t id, double start_s, double end_s,
                                std::optional<Bias> bias = std::nullopt);

/// Ratio-extracted gold target for the span. Translating a longer span with
/// the same start extends the output; it never rewrites it.
Tokens mock_stable_translate(const Span& span, const Talk& talk);

/// Deterministic placeholder for an unstable token. The key includes the
/// parity of the source length so that retranslating with one more source
/// token yields a different placeholder.
std::string unstable_variant(std::string_view token, std::size_t source_length);

struct UnstableOptions {
  /// The last tail_k tokens are always replaced by placeholders.
  std::size_t tail_k = 2;
  /// Probability with which any other position is also replaced, decided by
  /// hashing (token, position, source length). Zero keeps the output stable
  /// outside the tail.
  double drift = 0.0;
};

/// mock_stable_translate with the tail (and optionally drifting positions)
/// replaced by unstable_variant placeholders.
Tokens mock_unstable_translate(const Tokens& source, const Span& span, const Talk& talk,
                               const UnstableOptions& options = {});

class MockStableTranslator final : public Translator {
 public:
  explicit MockStableTranslator(Talk talk) : talk_(std::move(talk)) {}
  TranslationResponse translate(const TranslationRequest& request) override;

 private:
  Talk talk_;
};

class MockUnstableTranslator final : public Translator {
 public:
  MockUnstableTranslator(Talk talk, UnstableOptions options) : talk_(std::move(talk)), options_(options) {}
  TranslationResponse translate(const TranslationRequest& request) override;

 private:
  Talk talk_;
  UnstableOptions options_;
};

/// Newline-delimited JSON wire format spoken with external backends.
namespace wire {

/// One line, no trailing newline: {"id":..,"src":[..],"span":[s,e],"bias":{..}}.
std::string encode_request(const TranslationRequest& request);
TranslationRequest decode_request(std::string_view line);

std::string encode_response(const TranslationResponse& response);
std::string encode_error(std::optional<std::int64_t> id, std::string_view error);

/// Parses a response line. An `error` member, a malformed line, or a missing
/// `tgt` throws TransportError attributed to expected_id.
TranslationResponse decode_response(std::string_view line, std::int64_t expected_id);

}  // namespace wire

/// 64-bit FNV-1a, stable across platforms.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t mix_hash(std::uint64_t h, std::uint64_t value);
double hash_unit(std::uint64_t h);

}  // namespace slt
