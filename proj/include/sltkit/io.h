// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

// Text formats shared by every tool.
//
// Talk file (UTF-8, one record per line, blank lines and `#` comments other
// than the header ignored):
//
//   #talk <id> <duration_s>
//   T <start> <end> <text>
//   G<TAB><start><TAB><end><TAB><source text><TAB><target text>
//
// Header and T fields may be separated by tabs or spaces; G records are
// tab-separated since their texts are space-tokenized.
//
// Update log:   `P <emit_s> <tokens...>` / `C <emit_s> <tokens...>`,
//               emit times with exactly two decimals.
// Trace:        `F <frame_period_s>` then one probability per line.
// Spans:        `S <start> <end> <kind>`.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sltkit/types.h"

namespace slt {

Talk parse_talk(std::istream& in, const std::string& source_name = "<talk>");
Talk read_talk(const std::filesystem::path& path);
void write_talk(const Talk& talk, std::ostream& out);

/// Throws ValidationError naming the offending record.
void validate(const Talk& talk);
void validate(const UpdateLog& log);
void validate(const ProbabilityTrace& trace);

UpdateLog parse_update_log(std::istream& in, std::string talk_id,
                           const std::string& source_name = "<log>");
UpdateLog read_update_log(const std::filesystem::path& path);
void write_update_log(const UpdateLog& log, std::ostream& out);
void write_update_log(const UpdateLog& log, const std::filesystem::path& path);

ProbabilityTrace parse_trace(std::istream& in, const std::string& source_name = "<trace>");
ProbabilityTrace read_trace(const std::filesystem::path& path);
void write_trace(const ProbabilityTrace& trace, std::ostream& out);

void write_spans(const std::vector<Span>& spans, std::ostream& out);
std::vector<Span> parse_spans(std::istream& in, const std::string& source_name = "<spans>");

/// Shortest decimal text that reads back to the same double.
std::string format_seconds(double value);
/// Fixed two-decimal text used by update logs.
std::string format_centis(double value);

/// Writes via a sibling temporary file and rename, so readers never observe
/// a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace slt
