// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

// Scriptable backend for transport tests:
//   fake_backend echo        uppercases src; error object on malformed lines
//   fake_backend crash       exits after reading the first request
//   fake_backend wrong-id    answers with id + 1
//   fake_backend error       answers every request with an error object
//   fake_backend slow <ms>   sleeps before each answer
//   fake_backend garbage     answers with a non-JSON line
//   fake_backend strict      exits on a malformed line instead of reporting it
//   fake_backend split       writes each answer across two lines

#include <cctype>
#include <chrono>
#include <iostream>
#include <string>
#include <thread>

#include <json.hpp>

using nlohmann::json;

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "echo";
  const int delay_ms = argc > 2 ? std::stoi(argv[2]) : 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    json req;
    try {
      req = json::parse(line);
      if (!req.is_object() || !req.contains("id") || !req.contains("src")) throw std::runtime_error("shape");
    } catch (const std::exception&) {
      if (mode == "strict") return 1;
      std::cout << json{{"id", nullptr}, {"error", "parse"}}.dump() << std::endl;
      continue;
    }
    const auto id = req["id"];
    if (mode == "crash") return 3;
    if (mode == "slow") std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    if (mode == "garbage") {
      std::cout << "not json at all" << std::endl;
      continue;
    }
    if (mode == "error") {
      std::cout << json{{"id", id}, {"error", "upstream"}}.dump() << std::endl;
      continue;
    }
    json tgt = json::array();
    for (const auto& tok : req["src"]) {
      auto s = tok.get<std::string>();
      for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      tgt.push_back(s);
    }
    json resp{{"id", mode == "wrong-id" ? json(id.get<long long>() + 1) : id}, {"tgt", tgt}};
    if (mode == "split") {
      const auto text = resp.dump();
      std::cout << text.substr(0, text.size() / 2) << '\n' << text.substr(text.size() / 2) << std::endl;
      continue;
    }
    std::cout << resp.dump() << std::endl;
  }
  return 0;
}
