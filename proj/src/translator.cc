// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sltkit/translator.h"

#include <json.hpp>

#include "sltkit/dataprep.h"
#include "sltkit/errors.h"
#include "sltkit/io.h"

namespace slt {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix_hash(std::uint64_t h, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  // splitmix64 finalizer; raw FNV low bits are poorly mixed
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

double hash_unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

TranslationRequest make_request(const Talk& talk, std::int64_t id, double start_s, double end_s,
                                std::optional<Bias> bias) {
  TranslationRequest req;
  req.id = id;
  req.source = source_tokens_in(talk, start_s, end_s);
  req.span = {start_s, end_s, SpanKind::kFixed};
  req.bias = std::move(bias);
  return req;
}

Tokens mock_stable_translate(const Span& span, const Talk& talk) {
  if (span.start_s < 0.0 || span.end_s > talk.duration_s + 1e-9 || span.start_s > span.end_s) {
    throw ValidationError("span [" + format_seconds(span.start_s) + "," + format_seconds(span.end_s) +
                          ") lies outside talk " + talk.id);
  }
  return target_extract_by_ratio(talk.gold, span.start_s, span.end_s);
}

std::string unstable_variant(std::string_view token, std::size_t source_length) {
  std::string out(token);
  out += (source_length % 2 == 0) ? "~0" : "~1";
  return out;
}

Tokens mock_unstable_translate(const Tokens& source, const Span& span, const Talk& talk,
                               const UnstableOptions& options) {
  Tokens out = mock_stable_translate(span, talk);
  const std::size_t n = out.size();
  const std::size_t tail_from = n - std::min(options.tail_k, n);
  for (std::size_t i = 0; i < n; ++i) {
    bool replace = i >= tail_from;
    if (!replace && options.drift > 0.0) {
      const auto h = mix_hash(mix_hash(fnv1a(out[i]), i), source.size());
      replace = hash_unit(h) < options.drift;
    }
    if (replace) out[i] = unstable_variant(out[i], source.size());
  }
  return out;
}

TranslationResponse MockStableTranslator::translate(const TranslationRequest& request) {
  return {request.id, mock_stable_translate(request.span, talk_)};
}

TranslationResponse MockUnstableTranslator::translate(const TranslationRequest& request) {
  return {request.id, mock_unstable_translate(request.source, request.span, talk_, options_)};
}

namespace wire {

std::string encode_request(const TranslationRequest& request) {
  json j;
  j["id"] = request.id;
  j["src"] = request.source;
  j["span"] = json::array({request.span.start_s, request.span.end_s});
  if (request.bias) {
    j["bias"] = {{"prefix", request.bias->prefix}, {"beta", request.bias->beta}, {"mask", request.bias->mask_k}};
  }
  return j.dump();
}

TranslationRequest decode_request(std::string_view line) {
  const json j = json::parse(line.begin(), line.end());
  TranslationRequest req;
  req.id = j.at("id").get<std::int64_t>();
  req.source = j.at("src").get<Tokens>();
  const auto& span = j.at("span");
  req.span = {span.at(0).get<double>(), span.at(1).get<double>(), SpanKind::kFixed};
  if (j.contains("bias")) {
    const auto& b = j.at("bias");
    req.bias = Bias{b.at("prefix").get<Tokens>(), b.at("beta").get<double>(), b.at("mask").get<int>()};
  }
  return req;
}

std::string encode_response(const TranslationResponse& response) {
  return json{{"id", response.id}, {"tgt", response.target}}.dump();
}

std::string encode_error(std::optional<std::int64_t> id, std::string_view error) {
  json j;
  j["id"] = id ? json(*id) : json(nullptr);
  j["error"] = std::string(error);
  return j.dump();
}

TranslationResponse decode_response(std::string_view line, std::int64_t expected_id) {
  json j;
  try {
    j = json::parse(line.begin(), line.end());
  } catch (const json::parse_error&) {
    throw TransportError(expected_id, "malformed response line");
  }
  if (!j.is_object()) throw TransportError(expected_id, "response is not a JSON object");
  if (j.contains("error")) {
    const auto& e = j["error"];
    throw TransportError(expected_id, "backend error: " + (e.is_string() ? e.get<std::string>() : e.dump()));
  }
  if (!j.contains("id") || !j["id"].is_number_integer()) throw TransportError(expected_id, "response lacks integer id");
  const auto id = j["id"].get<std::int64_t>();
  if (id != expected_id) {
    throw TransportError(expected_id, "response id " + std::to_string(id) + " does not echo the request");
  }
  if (!j.contains("tgt") || !j["tgt"].is_array()) throw TransportError(expected_id, "response lacks tgt array");
  TranslationResponse resp;
  resp.id = id;
  for (const auto& tok : j["tgt"]) {
    if (!tok.is_string()) throw TransportError(expected_id, "tgt must contain strings");
    // backends may hand back multi-word strings; the display format is whitespace-tokenized
    for (auto& piece : tokenize(tok.get<std::string>())) resp.target.push_back(std::move(piece));
  }
  return resp;
}

}  // namespace wire

}  // namespace slt
