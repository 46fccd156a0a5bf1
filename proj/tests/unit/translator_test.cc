// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "sltkit/dataprep.h"
#include "sltkit/errors.h"
#include "sltkit/translator.h"
#include "talk_gen.h"

using namespace slt;

namespace {

Talk ten_second_talk() {
  Talk talk{"m", 20, {}, {}};
  for (int i = 0; i < 20; ++i) talk.source.push_back({"s" + std::to_string(i), i + 0.0, i + 0.5});
  talk.gold = {{0, 10, {"s"}, {"w1", "w2", "w3", "w4", "w5"}}, {10, 20, {"s"}, {"v1", "v2", "v3", "v4", "v5"}}};
  return talk;
}

}  // namespace

TEST_CASE("stable mock follows the ratio rule") {
  const auto talk = ten_second_talk();
  CHECK(mock_stable_translate({0, 10, SpanKind::kFixed}, talk) == Tokens{"w1", "w2", "w3", "w4", "w5"});
  CHECK(mock_stable_translate({0, 4, SpanKind::kFixed}, talk) == Tokens{"w1", "w2"});
  CHECK(mock_stable_translate({8, 14, SpanKind::kFixed}, talk) == Tokens{"w5", "v1", "v2"});
  CHECK(mock_stable_translate({15, 15, SpanKind::kFixed}, talk).empty());
  CHECK_THROWS_AS(mock_stable_translate({15, 25, SpanKind::kFixed}, talk), ValidationError);
  CHECK_THROWS_AS(mock_stable_translate({-1, 5, SpanKind::kFixed}, talk), ValidationError);
}

TEST_CASE("stable mock is prefix-stable") {
  const auto talk = testing::generate_talk(21);
  Rng rng(2);
  for (int i = 0; i < 300; ++i) {
    const double s = rng.uniform(0, talk.duration_s);
    const double a = rng.uniform(s, talk.duration_s);
    const double b = rng.uniform(a, talk.duration_s);
    const auto shorter = mock_stable_translate({s, a, SpanKind::kFixed}, talk);
    const auto longer = mock_stable_translate({s, b, SpanKind::kFixed}, talk);
    REQUIRE(shorter.size() <= longer.size());
    CHECK(std::equal(shorter.begin(), shorter.end(), longer.begin()));
  }
}

TEST_CASE("unstable mock") {
  const auto talk = ten_second_talk();
  const Span span{0, 10, SpanKind::kFixed};
  const auto stable = mock_stable_translate(span, talk);
  const Tokens src4{"a", "b", "c", "d"};
  const Tokens src5{"a", "b", "c", "d", "e"};

  CHECK(mock_unstable_translate(src4, span, talk, {0, 0.0}) == stable);

  const auto even = mock_unstable_translate(src4, span, talk, {2, 0.0});
  const auto odd = mock_unstable_translate(src5, span, talk, {2, 0.0});
  CHECK(even == Tokens{"w1", "w2", "w3", "w4~0", "w5~0"});
  CHECK(odd == Tokens{"w1", "w2", "w3", "w4~1", "w5~1"});

  // Drift perturbs earlier positions too, deterministically.
  const auto d1 = mock_unstable_translate(src4, span, talk, {2, 1.0});
  CHECK(d1 == Tokens{"w1~0", "w2~0", "w3~0", "w4~0", "w5~0"});
  const auto t = testing::generate_talk(4);
  const Span whole{0, t.duration_s, SpanKind::kFixed};
  const auto src = source_tokens_in(t, 0, t.duration_s);
  CHECK(mock_unstable_translate(src, whole, t, {2, 0.2}) == mock_unstable_translate(src, whole, t, {2, 0.2}));
  CHECK(mock_unstable_translate(src, whole, t, {2, 0.2}) != mock_unstable_translate(src, whole, t, {2, 0.0}));
}

TEST_CASE("mock translators echo ids") {
  const auto talk = ten_second_talk();
  MockStableTranslator stable(talk);
  const auto req = make_request(talk, 9, 0, 4);
  CHECK(req.source == Tokens{"s0", "s1", "s2", "s3"});
  const auto resp = stable.translate(req);
  CHECK(resp.id == 9);
  CHECK(resp.target == Tokens{"w1", "w2"});
  MockUnstableTranslator unstable(talk, {});
  CHECK(unstable.translate(req).target == Tokens{"w1~0", "w2~0"});
}

TEST_CASE("wire request round trip") {
  TranslationRequest req;
  req.id = 12;
  req.source = {"quote\"d", "back\\slash", "\xc3\xbc", "tab\there"};
  req.span = {1.5, 3.25, SpanKind::kFixed};
  CHECK(wire::decode_request(wire::encode_request(req)) == req);
  req.bias = Bias{{"x", "y"}, 0.25, 5};
  const auto line = wire::encode_request(req);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(line.find("\"bias\":{\"beta\":0.25,\"mask\":5,\"prefix\":[\"x\",\"y\"]}") != std::string::npos);
  CHECK(wire::decode_request(line) == req);
}

TEST_CASE("wire responses") {
  CHECK(wire::encode_response({3, {"a", "b"}}) == R"({"id":3,"tgt":["a","b"]})");
  CHECK(wire::decode_response(R"({"id":3,"tgt":["a","b"]})", 3) == TranslationResponse{3, {"a", "b"}});
  CHECK(wire::decode_response(R"({"id":3,"tgt":["a  b"]})", 3).target == Tokens{"a", "b"});
  CHECK(wire::encode_error(std::nullopt, "parse") == R"({"error":"parse","id":null})");

  CHECK_THROWS_WITH_AS(wire::decode_response(R"({"id":4,"tgt":[]})", 3), doctest::Contains("request 3"),
                       TransportError);
  CHECK_THROWS_AS(wire::decode_response("nope", 3), TransportError);
  CHECK_THROWS_AS(wire::decode_response(R"({"id":3})", 3), TransportError);
  CHECK_THROWS_AS(wire::decode_response(R"([1,2])", 3), TransportError);
  CHECK_THROWS_WITH_AS(wire::decode_response(R"({"id":3,"error":"upstream"})", 3), doctest::Contains("upstream"),
                       TransportError);
  try {
    wire::decode_response(R"({"id":3,"error":"x"})", 3);
  } catch (const TransportError& e) {
    CHECK(e.request_id() == 3);
  }
}
