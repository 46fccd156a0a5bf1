// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace slt {

/// Malformed input text. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a data-model invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range configuration values.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A translator backend failed or spoke the wire protocol incorrectly.
class TransportError : public std::runtime_error {
 public:
  TransportError(std::int64_t request_id, const std::string& what)
      : std::runtime_error("request " + std::to_string(request_id) + ": " + what),
        request_id_(request_id),
        detail_(what) {}

  std::int64_t request_id() const { return request_id_; }
  /// The message without the request prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::int64_t request_id_;
  std::string detail_;
};

class TimeoutError : public TransportError {
 public:
  using TransportError::TransportError;
};

/// A scorer broke its contract (e.g. returned an unnormalized distribution).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace slt
