// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sltkit/io.h"

#include <unistd.h>

#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "sltkit/errors.h"

namespace slt {

std::string_view to_string(SpanKind kind) {
  switch (kind) {
    case SpanKind::kGold: return "gold";
    case SpanKind::kProb: return "prob";
    case SpanKind::kFixed: return "fixed";
    case SpanKind::kSliding: return "sliding";
  }
  return "?";
}

std::optional<SpanKind> parse_span_kind(std::string_view text) {
  if (text == "gold") return SpanKind::kGold;
  if (text == "prob") return SpanKind::kProb;
  if (text == "fixed") return SpanKind::kFixed;
  if (text == "sliding") return SpanKind::kSliding;
  return std::nullopt;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool is_blank(std::string_view line) {
  for (char c : line) {
    if (!is_space(c)) return false;
  }
  return true;
}

double parse_number(std::string_view text, const std::string& source, std::size_t line, const char* what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw ParseError(source, line, std::string("bad ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join(const Tokens& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

Tokens source_tokens_in(const Talk& talk, double start_s, double end_s) {
  Tokens out;
  for (const auto& tok : talk.source) {
    if (tok.start_s < end_s && tok.end_s > start_s) out.push_back(tok.text);
  }
  return out;
}

std::string format_seconds(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;
  return std::string(buf.data(), ptr);
}

std::string format_centis(double value) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f", value);
  return buf.data();
}

// ---------------------------------------------------------------------------
// Talk

void validate(const Talk& talk) {
  if (talk.id.empty()) throw ValidationError("talk: empty id");
  if (!(talk.duration_s > 0.0)) throw ValidationError("talk " + talk.id + ": duration must be positive");
  if (talk.source.empty()) throw ValidationError("talk " + talk.id + ": talk must be non-empty (no source tokens)");
  for (std::size_t i = 0; i < talk.source.size(); ++i) {
    const auto& tok = talk.source[i];
    const std::string where = "talk " + talk.id + ": token " + std::to_string(i) + " '" + tok.text + "'";
    if (tok.text.empty() || tokenize(tok.text).size() != 1) throw ValidationError(where + ": text must be one non-empty token");
    if (!(tok.start_s >= 0.0 && tok.start_s < tok.end_s)) throw ValidationError(where + ": needs 0 <= start < end");
    if (tok.end_s > talk.duration_s) throw ValidationError(where + ": ends after talk duration");
    if (i > 0 && tok.start_s < talk.source[i - 1].end_s) {
      throw ValidationError(where + ": overlaps or precedes the previous token");
    }
  }
  for (std::size_t i = 0; i < talk.gold.size(); ++i) {
    const auto& seg = talk.gold[i];
    const std::string where = "talk " + talk.id + ": gold segment " + std::to_string(i);
    if (!(seg.start_s >= 0.0 && seg.start_s < seg.end_s)) throw ValidationError(where + ": needs 0 <= start < end");
    if (seg.end_s > talk.duration_s) throw ValidationError(where + ": ends after talk duration");
    if (i > 0 && seg.start_s < talk.gold[i - 1].end_s) {
      throw ValidationError(where + ": overlaps or precedes the previous segment");
    }
  }
}

Talk parse_talk(std::istream& in, const std::string& source_name) {
  Talk talk;
  bool have_header = false;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    if (line.starts_with("#talk")) {
      if (have_header) throw ParseError(source_name, lineno, "duplicate #talk header");
      const auto fields = tokenize(line);
      if (fields.size() != 3 || fields[0] != "#talk") {
        throw ParseError(source_name, lineno, "expected '#talk <id> <duration_s>'");
      }
      talk.id = fields[1];
      talk.duration_s = parse_number(fields[2], source_name, lineno, "duration");
      have_header = true;
      continue;
    }
    if (line.front() == '#') continue;
    if (!have_header) throw ParseError(source_name, lineno, "record before '#talk' header");

    if (line.front() == 'T' && line.size() > 1 && is_space(line[1])) {
      const auto fields = tokenize(line);
      if (fields.size() != 4) throw ParseError(source_name, lineno, "expected 'T <start> <end> <text>'");
      talk.source.push_back({fields[3], parse_number(fields[1], source_name, lineno, "start"),
                             parse_number(fields[2], source_name, lineno, "end")});
    } else if (line.front() == 'G' && line.size() > 1 && line[1] == '\t') {
      const auto fields = split_tabs(line);
      if (fields.size() != 5) {
        throw ParseError(source_name, lineno, "expected 'G<TAB>start<TAB>end<TAB>source<TAB>target'");
      }
      GoldSegment seg;
      seg.start_s = parse_number(fields[1], source_name, lineno, "start");
      seg.end_s = parse_number(fields[2], source_name, lineno, "end");
      seg.source_text = tokenize(fields[3]);
      seg.target_text = tokenize(fields[4]);
      talk.gold.push_back(std::move(seg));
    } else {
      throw ParseError(source_name, lineno, "unknown record type");
    }
  }
  if (!have_header) throw ParseError(source_name, lineno == 0 ? 1 : lineno, "missing '#talk' header");
  validate(talk);
  return talk;
}

Talk read_talk(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open talk file " + path.string());
  return parse_talk(in, path.string());
}

void write_talk(const Talk& talk, std::ostream& out) {
  out << "#talk " << talk.id << ' ' << format_seconds(talk.duration_s) << '\n';
  for (const auto& tok : talk.source) {
    out << "T\t" << format_seconds(tok.start_s) << '\t' << format_seconds(tok.end_s) << '\t' << tok.text << '\n';
  }
  for (const auto& seg : talk.gold) {
    out << "G\t" << format_seconds(seg.start_s) << '\t' << format_seconds(seg.end_s) << '\t'
        << join(seg.source_text) << '\t' << join(seg.target_text) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Update log

void validate(const UpdateLog& log) {
  const std::string who = log.talk_id.empty() ? "update log" : "update log " + log.talk_id;
  if (log.updates.empty()) throw ValidationError(who + ": log is empty");
  for (std::size_t i = 0; i < log.updates.size(); ++i) {
    const auto& u = log.updates[i];
    if (!std::isfinite(u.emit_s) || u.emit_s < 0.0) {
      throw ValidationError(who + ": update " + std::to_string(i) + ": bad emit time");
    }
    if (i > 0 && !(u.emit_s > log.updates[i - 1].emit_s)) {
      throw ValidationError(who + ": update " + std::to_string(i) + ": emit times must strictly increase");
    }
  }
  if (log.updates.back().kind != UpdateKind::kComplete) throw ValidationError(who + ": log not finalized");
}

UpdateLog parse_update_log(std::istream& in, std::string talk_id, const std::string& source_name) {
  UpdateLog log;
  log.talk_id = std::move(talk_id);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    auto fields = tokenize(line);
    if (fields.size() < 2 || (fields[0] != "P" && fields[0] != "C")) {
      throw ParseError(source_name, lineno, "expected 'P|C <emit_s> <text>'");
    }
    DisplayUpdate u;
    u.kind = fields[0] == "C" ? UpdateKind::kComplete : UpdateKind::kPartial;
    u.emit_s = parse_number(fields[1], source_name, lineno, "emit time");
    u.tokens.assign(std::make_move_iterator(fields.begin() + 2), std::make_move_iterator(fields.end()));
    log.updates.push_back(std::move(u));
  }
  validate(log);
  return log;
}

UpdateLog read_update_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open update log " + path.string());
  return parse_update_log(in, path.stem().string(), path.string());
}

void write_update_log(const UpdateLog& log, std::ostream& out) {
  validate(log);
  for (const auto& u : log.updates) {
    out << (u.kind == UpdateKind::kComplete ? 'C' : 'P') << ' ' << format_centis(u.emit_s);
    if (!u.tokens.empty()) out << ' ' << join(u.tokens);
    out << '\n';
  }
}

void write_update_log(const UpdateLog& log, const std::filesystem::path& path) {
  std::ostringstream buf;
  write_update_log(log, buf);
  write_file_atomic(path, buf.str());
}

// ---------------------------------------------------------------------------
// Probability trace

void validate(const ProbabilityTrace& trace) {
  if (!(trace.frame_period_s > 0.0)) throw ValidationError("trace: frame period must be positive");
  for (std::size_t i = 0; i < trace.probs.size(); ++i) {
    const double p = trace.probs[i];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("trace: frame " + std::to_string(i) + ": probability outside [0,1]");
    }
  }
}

ProbabilityTrace parse_trace(std::istream& in, const std::string& source_name) {
  ProbabilityTrace trace;
  bool have_header = false;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    const auto fields = tokenize(line);
    if (!have_header) {
      if (fields.size() != 2 || fields[0] != "F") throw ParseError(source_name, lineno, "expected 'F <frame_period_s>'");
      trace.frame_period_s = parse_number(fields[1], source_name, lineno, "frame period");
      have_header = true;
      continue;
    }
    if (fields.size() != 1) throw ParseError(source_name, lineno, "expected one probability per line");
    trace.probs.push_back(parse_number(fields[0], source_name, lineno, "probability"));
  }
  if (!have_header) throw ParseError(source_name, lineno == 0 ? 1 : lineno, "missing 'F' header");
  validate(trace);
  return trace;
}

ProbabilityTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file " + path.string());
  return parse_trace(in, path.string());
}

void write_trace(const ProbabilityTrace& trace, std::ostream& out) {
  out << "F " << format_seconds(trace.frame_period_s) << '\n';
  for (double p : trace.probs) out << format_seconds(p) << '\n';
}

// ---------------------------------------------------------------------------
// Spans

void write_spans(const std::vector<Span>& spans, std::ostream& out) {
  for (const auto& s : spans) {
    out << "S " << format_seconds(s.start_s) << ' ' << format_seconds(s.end_s) << ' ' << to_string(s.kind) << '\n';
  }
}

std::vector<Span> parse_spans(std::istream& in, const std::string& source_name) {
  std::vector<Span> spans;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string_view line = strip_cr(raw);
    if (is_blank(line)) continue;
    const auto fields = tokenize(line);
    if (fields.size() != 4 || fields[0] != "S") throw ParseError(source_name, lineno, "expected 'S <start> <end> <kind>'");
    const auto kind = parse_span_kind(fields[3]);
    if (!kind) throw ParseError(source_name, lineno, "unknown span kind '" + fields[3] + "'");
    spans.push_back({parse_number(fields[1], source_name, lineno, "start"),
                     parse_number(fields[2], source_name, lineno, "end"), *kind});
  }
  return spans;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot rename into " + path.string());
  }
}

}  // namespace slt
