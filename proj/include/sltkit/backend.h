// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

// Backend specifications as given on the command line:
//   mock:stable
//   mock:unstable[:tail=<k>][,drift=<p>]
//   toy-beam:<lexicon file>
//   exec:<shell command>

#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>

#include "sltkit/decoder.h"
#include "sltkit/subprocess_translator.h"
#include "sltkit/translator.h"

namespace slt {

class BackendFactory {
 public:
  enum class Kind { kMockStable, kMockUnstable, kToyBeam, kExec };

  /// Parses the spec and loads any lexicon. Throws ParameterError on a
  /// malformed spec.
  explicit BackendFactory(std::string_view spec, std::chrono::milliseconds timeout = kDefaultBackendTimeout,
                          BeamOptions beam = {});

  /// A fresh translator for one talk. Mocks read their answers from the talk;
  /// exec starts one backend process per call.
  std::unique_ptr<Translator> create(const Talk& talk) const;

  Kind kind() const { return kind_; }

 private:
  Kind kind_ = Kind::kMockStable;
  UnstableOptions unstable_;
  std::shared_ptr<const Scorer> scorer_;
  BeamOptions beam_;
  std::string command_;
  std::chrono::milliseconds timeout_;
};

}  // namespace slt
