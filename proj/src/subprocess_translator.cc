// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "sltkit/subprocess_translator.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sltkit/errors.h"

namespace slt {

namespace {

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void close_fd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

}  // namespace

ChildProcess::ChildProcess(const std::string& command) {
  ignore_sigpipe();
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw std::runtime_error(std::string("pipe: ") + std::strerror(errno));
  }
  pid_ = ::fork();
  if (pid_ < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw std::runtime_error(std::string("fork: ") + std::strerror(errno));
  }
  if (pid_ == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

ChildProcess::~ChildProcess() { close_and_wait(); }

bool ChildProcess::write_line(std::string_view line) {
  if (to_child_ < 0) return false;
  std::string data(line);
  data.push_back('\n');
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

std::optional<std::string> ChildProcess::read_line(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (eof_ || from_child_ < 0) return std::nullopt;

    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw std::runtime_error("timeout");
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error(std::string("poll: ") + std::strerror(errno));
    }
    if (ready == 0) throw std::runtime_error("timeout");

    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw std::runtime_error(std::string("read: ") + std::strerror(errno));
    }
    if (n == 0) {
      eof_ = true;
    } else {
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }
}

int ChildProcess::close_and_wait(std::chrono::milliseconds grace) {
  close_fd(to_child_);
  if (reaped_ || pid_ <= 0) {
    close_fd(from_child_);
    return 0;
  }
  int status = 0;
  const auto deadline = std::chrono::steady_clock::now() + grace;
  while (true) {
    const pid_t r = ::waitpid(pid_, &status, WNOHANG);
    if (r == pid_) break;
    if (r < 0 && errno != EINTR) {
      status = -1;
      break;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
      status = -1;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  reaped_ = true;
  close_fd(from_child_);
  return status;
}

// ---------------------------------------------------------------------------

SubprocessTranslator::SubprocessTranslator(const std::string& command, std::chrono::milliseconds timeout)
    : child_(command), timeout_(timeout) {}

TranslationResponse SubprocessTranslator::translate(const TranslationRequest& request) {
  if (broken_) throw TransportError(request.id, "backend connection is closed after an earlier failure");
  broken_ = true;
  if (!child_.write_line(wire::encode_request(request))) {
    throw TransportError(request.id, "backend stopped reading its input");
  }
  std::optional<std::string> line;
  try {
    line = child_.read_line(timeout_);
  } catch (const std::runtime_error& e) {
    if (std::string_view(e.what()) == "timeout") {
      throw TimeoutError(request.id, "no response within " + std::to_string(timeout_.count()) + " ms");
    }
    throw TransportError(request.id, e.what());
  }
  if (!line) throw TransportError(request.id, "backend exited before responding");
  auto response = wire::decode_response(*line, request.id);
  broken_ = false;
  return response;
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

TranslationRequest sample_request(std::int64_t id, Tokens src) {
  TranslationRequest req;
  req.id = id;
  req.source = std::move(src);
  req.span = {0.0, 2.0, SpanKind::kFixed};
  return req;
}

ConformanceCheck check(std::string name, const std::function<std::string(ChildProcess&)>& body,
                       const std::string& command) {
  ConformanceCheck result{std::move(name), false, {}};
  try {
    ChildProcess child(command);
    result.detail = body(child);
    result.passed = result.detail.empty();
  } catch (const std::exception& e) {
    result.detail = e.what();
  }
  return result;
}

std::string expect_response(ChildProcess& child, std::int64_t id, std::chrono::milliseconds timeout) {
  const auto line = child.read_line(timeout);
  if (!line) return "backend closed its output";
  try {
    (void)wire::decode_response(*line, id);
  } catch (const TransportError& e) {
    return std::string(e.what()) + " (line: " + *line + ")";
  }
  return {};
}

}  // namespace

std::vector<ConformanceCheck> run_conformance_suite(const std::string& command, std::chrono::milliseconds timeout) {
  std::vector<ConformanceCheck> checks;

  checks.push_back(check(
      "id-echo",
      [&](ChildProcess& child) -> std::string {
        if (!child.write_line(wire::encode_request(sample_request(17, {"a", "b"})))) return "write failed";
        return expect_response(child, 17, timeout);
      },
      command));

  checks.push_back(check(
      "ordering",
      [&](ChildProcess& child) -> std::string {
        for (std::int64_t id = 1; id <= 5; ++id) {
          if (!child.write_line(wire::encode_request(sample_request(id * 10, {"w" + std::to_string(id)})))) {
            return "write failed";
          }
        }
        for (std::int64_t id = 1; id <= 5; ++id) {
          if (auto err = expect_response(child, id * 10, timeout); !err.empty()) return err;
        }
        return {};
      },
      command));

  checks.push_back(check(
      "framing",
      [&](ChildProcess& child) -> std::string {
        auto req = sample_request(3, {"quote\"d", "back\\slash", "\xc3\xbc" "ber", "tab\there"});
        req.bias = Bias{{"x", "y"}, 0.25, 5};
        if (!child.write_line(wire::encode_request(req))) return "write failed";
        if (auto err = expect_response(child, 3, timeout); !err.empty()) return err;
        if (!child.write_line(wire::encode_request(sample_request(4, {})))) return "write failed";
        return expect_response(child, 4, timeout);
      },
      command));

  checks.push_back(check(
      "error-object",
      [&](ChildProcess& child) -> std::string {
        if (!child.write_line("this is not json")) return "write failed";
        const auto line = child.read_line(timeout);
        if (!line) return "backend closed its output after a malformed line";
        json j;
        try {
          j = json::parse(*line);
        } catch (const json::parse_error&) {
          return "error reply is not JSON: " + *line;
        }
        if (!j.is_object() || !j.contains("error")) return "malformed request did not yield an error object: " + *line;
        if (!j.contains("id") || !j["id"].is_null()) return "error object for an unparseable line must carry id null";
        if (!child.write_line(wire::encode_request(sample_request(8, {"after"})))) return "write failed";
        return expect_response(child, 8, timeout);
      },
      command));

  return checks;
}

}  // namespace slt
