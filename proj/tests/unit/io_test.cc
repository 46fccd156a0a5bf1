// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sltkit/errors.h"
#include "sltkit/io.h"
#include "talk_gen.h"

using namespace slt;

namespace {

Talk parse(const std::string& text) {
  std::istringstream in(text);
  return parse_talk(in, "t");
}

UpdateLog parse_log(const std::string& text) {
  std::istringstream in(text);
  return parse_update_log(in, "x");
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("talk with two tokens and one gold segment") {
  const auto talk = parse("#talk hw 1.0\nT 0 0.5 hello\nT 0.5 1.0 world\nG\t0\t1\thello world\thallo welt\n");
  CHECK(talk.id == "hw");
  CHECK(talk.duration_s == 1.0);
  REQUIRE(talk.source.size() == 2);
  CHECK(talk.source[1] == TimedToken{"world", 0.5, 1.0});
  REQUIRE(talk.gold.size() == 1);
  CHECK(talk.gold[0].target_text == Tokens{"hallo", "welt"});
}

TEST_CASE("talk validation") {
  CHECK_THROWS_WITH_AS(parse("#talk e 1.0\n"), doctest::Contains("non-empty"), ValidationError);
  CHECK_THROWS_WITH_AS(parse("#talk o 2\nT 0 1 a\nT 0.5 1.5 b\n"), doctest::Contains("token 1 'b'"),
                       ValidationError);
  CHECK_THROWS_AS(parse("#talk o 1\nT 0 2 a\n"), ValidationError);
  CHECK_THROWS_AS(parse("#talk o 9\nT 0 1 a\nG\t0\t5\ta\tb\nG\t4\t6\ta\tb\n"), ValidationError);
  CHECK_THROWS_AS(parse("#talk o 9\nT 1 1 a\n"), ValidationError);
}

TEST_CASE("talk parse errors carry line numbers") {
  CHECK(parse_error_line("#talk a 1\nT 0 x a\n") == 2);
  CHECK(parse_error_line("#talk a 1\n\nT 0 1\n") == 3);
  CHECK(parse_error_line("T 0 1 a\n") == 1);
  CHECK(parse_error_line("#talk a 1\nX 0 1 a\n") == 2);
  CHECK(parse_error_line("#talk a 1\nG\t0\t1\tonly source\n") == 2);
  CHECK(parse_error_line("#talk a 1\n#talk b 1\n") == 2);
}

TEST_CASE("talk round trip on generated talks") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto talk = testing::generate_talk(seed);
    std::ostringstream out;
    write_talk(talk, out);
    CHECK(parse(out.str()) == talk);
  }
}

TEST_CASE("update log round trip") {
  const std::string text =
      "P 13.18 O\nP 14.18 O horror ,\nP 15.18 O horror , terror , horror\nC 16.18 O horror , horror , horror .\n";
  const auto log = parse_log(text);
  REQUIRE(log.updates.size() == 4);
  CHECK(log.updates[2].tokens.size() == 6);
  CHECK(log.final_tokens().size() == 7);
  std::ostringstream out;
  write_update_log(log, out);
  CHECK(out.str() == text);
}

TEST_CASE("update log validation") {
  const auto one = parse_log("C 5.0 hello");
  CHECK(one.updates.size() == 1);
  CHECK(one.final_emit_s() == 5.0);
  CHECK_THROWS_WITH_AS(parse_log("P 1.00 a\n"), doctest::Contains("log not finalized"), ValidationError);
  CHECK_THROWS_AS(parse_log("P 2.00 a\nC 1.00 a\n"), ValidationError);
  CHECK_THROWS_AS(parse_log("P 2.00 a\nC 2.00 a\n"), ValidationError);
  CHECK_THROWS_AS(parse_log(""), ValidationError);
  CHECK_THROWS_AS(parse_log("Q 1.00 a\n"), ParseError);
}

TEST_CASE("empty updates print without trailing space") {
  UpdateLog log{"e", {{UpdateKind::kPartial, 2.0, {}}, {UpdateKind::kComplete, 4.5, {"a"}}}};
  std::ostringstream out;
  write_update_log(log, out);
  CHECK(out.str() == "P 2.00\nC 4.50 a\n");
  CHECK(parse_log(out.str()) == UpdateLog{"x", log.updates});
}

TEST_CASE("update log file name gives the talk id") {
  const auto dir = std::filesystem::temp_directory_path() / "sltkit_io_test";
  std::filesystem::create_directories(dir);
  const UpdateLog log{"talk7", {{UpdateKind::kComplete, 3.0, {"x", "y"}}}};
  write_update_log(log, dir / "talk7.log");
  CHECK(read_update_log(dir / "talk7.log") == log);
  std::filesystem::remove_all(dir);
}

TEST_CASE("trace and spans formats") {
  std::istringstream in("F 0.5\n0.1\n0.9\n");
  const auto trace = parse_trace(in);
  CHECK(trace.frame_period_s == 0.5);
  CHECK(trace.probs == std::vector<double>{0.1, 0.9});
  CHECK(trace.duration() == 1.0);
  std::ostringstream out;
  write_trace(trace, out);
  CHECK(out.str() == "F 0.5\n0.1\n0.9\n");

  std::istringstream bad("F 1\n1.5\n");
  CHECK_THROWS_AS(parse_trace(bad), ValidationError);
  std::istringstream no_header("0.5\n");
  CHECK_THROWS_AS(parse_trace(no_header), ParseError);

  const std::vector<Span> spans{{0, 26, SpanKind::kFixed}, {26, 30.5, SpanKind::kFixed}};
  std::ostringstream sout;
  write_spans(spans, sout);
  CHECK(sout.str() == "S 0 26 fixed\nS 26 30.5 fixed\n");
  std::istringstream sin(sout.str());
  CHECK(parse_spans(sin) == spans);
}

TEST_CASE("number formatting") {
  CHECK(format_seconds(0.1) == "0.1");
  CHECK(format_seconds(16.18) == "16.18");
  CHECK(format_centis(2.0) == "2.00");
  CHECK(format_centis(13.184) == "13.18");
}

TEST_CASE("source tokens by interval intersection") {
  const auto talk = parse("#talk s 4\nT 0 1 a\nT 1 2 b\nT 2 3 c\n");
  CHECK(source_tokens_in(talk, 0.5, 1.5) == Tokens{"a", "b"});
  CHECK(source_tokens_in(talk, 1.0, 2.0) == Tokens{"b"});
  CHECK(source_tokens_in(talk, 3.0, 4.0).empty());
}
