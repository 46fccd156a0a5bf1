// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sys/types.h>

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sltkit/translator.h"

namespace slt {

inline constexpr std::chrono::milliseconds kDefaultBackendTimeout{30000};

/// A child process started via `/bin/sh -c command` with line-oriented pipes
/// on its stdin and stdout. Stderr is inherited.
class ChildProcess {
 public:
  explicit ChildProcess(const std::string& command);
  ~ChildProcess();

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  /// Writes line plus '\n'. Returns false if the child no longer reads.
  bool write_line(std::string_view line);

  /// Next complete line without its '\n'; nullopt on EOF. Throws
  /// std::runtime_error("timeout") when nothing arrives in time.
  std::optional<std::string> read_line(std::chrono::milliseconds timeout);

  /// Closes the child's stdin and reaps it. Returns the exit status as
  /// reported by waitpid, or -1 if it had to be killed.
  int close_and_wait(std::chrono::milliseconds grace = std::chrono::milliseconds(2000));

  pid_t pid() const { return pid_; }

 private:
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  bool eof_ = false;
  bool reaped_ = false;
};

/// Translator speaking the newline-delimited JSON protocol with an external
/// process: one request line out, one response line back, strictly in order.
/// Any protocol violation or crash throws TransportError; after that the
/// connection is unusable.
class SubprocessTranslator final : public Translator {
 public:
  explicit SubprocessTranslator(const std::string& command,
                                std::chrono::milliseconds timeout = kDefaultBackendTimeout);

  TranslationResponse translate(const TranslationRequest& request) override;

 private:
  ChildProcess child_;
  std::chrono::milliseconds timeout_;
  bool broken_ = false;
};

/// Result of one conformance check.
struct ConformanceCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Drives a backend command through the protocol conformance suite: id echo,
/// ordering, one-line framing, error objects for malformed requests, and
/// survival after a bad line. Each check starts a fresh process.
std::vector<ConformanceCheck> run_conformance_suite(const std::string& command,
                                                    std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));

}  // namespace slt
