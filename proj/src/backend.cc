// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sltkit/backend.h"

#include <charconv>

#include "sltkit/errors.h"

namespace slt {

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParameterError("bad " + std::string(what) + " '" + std::string(text) + "' in backend spec");
  }
  return value;
}

UnstableOptions parse_unstable(std::string_view opts) {
  UnstableOptions out;
  while (!opts.empty()) {
    const auto comma = opts.find(',');
    const auto item = opts.substr(0, comma);
    opts = comma == std::string_view::npos ? std::string_view{} : opts.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ParameterError("expected key=value in '" + std::string(item) + "'");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "tail") {
      const double k = parse_number(value, "tail");
      if (k < 0 || k != static_cast<double>(static_cast<std::size_t>(k))) throw ParameterError("tail must be a count");
      out.tail_k = static_cast<std::size_t>(k);
    } else if (key == "drift") {
      out.drift = parse_number(value, "drift");
      if (!(out.drift >= 0.0 && out.drift <= 1.0)) throw ParameterError("drift must be in [0, 1]");
    } else {
      throw ParameterError("unknown unstable-mock option '" + std::string(key) + "'");
    }
  }
  return out;
}

}  // namespace

BackendFactory::BackendFactory(std::string_view spec, std::chrono::milliseconds timeout, BeamOptions beam)
    : beam_(beam), timeout_(timeout) {
  if (spec == "mock:stable") {
    kind_ = Kind::kMockStable;
  } else if (spec == "mock:unstable") {
    kind_ = Kind::kMockUnstable;
  } else if (spec.starts_with("mock:unstable:")) {
    kind_ = Kind::kMockUnstable;
    unstable_ = parse_unstable(spec.substr(14));
  } else if (spec.starts_with("toy-beam:") && spec.size() > 9) {
    kind_ = Kind::kToyBeam;
    scorer_ = read_lexicon(std::string(spec.substr(9)));
  } else if (spec.starts_with("exec:") && spec.size() > 5) {
    kind_ = Kind::kExec;
    command_ = std::string(spec.substr(5));
  } else {
    throw ParameterError("unknown backend '" + std::string(spec) +
                         "' (expected mock:stable, mock:unstable, toy-beam:<lexicon> or exec:<command>)");
  }
}

std::unique_ptr<Translator> BackendFactory::create(const Talk& talk) const {
  switch (kind_) {
    case Kind::kMockStable: return std::make_unique<MockStableTranslator>(talk);
    case Kind::kMockUnstable: return std::make_unique<MockUnstableTranslator>(talk, unstable_);
    case Kind::kToyBeam: return std::make_unique<BeamTranslator>(scorer_, beam_);
    case Kind::kExec: return std::make_unique<SubprocessTranslator>(command_, timeout_);
  }
  return nullptr;
}

}  // namespace slt
