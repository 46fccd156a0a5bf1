// Copyright 2026 The sltkit Authors
// SPDX-License-Identifier: Apache-2.0

// sltkit: segment, run, eval, augment, report and conform subcommands.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sltkit/backend.h"
#include "sltkit/dataprep.h"
#include "sltkit/errors.h"
#include "sltkit/io.h"
#include "sltkit/metrics.h"
#include "sltkit/orchestrator.h"
#include "sltkit/segmenters.h"
#include "sltkit/subprocess_translator.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitBackend = 3;
constexpr int kExitInvalid = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Files given directly, or every file with the extension inside directories,
// sorted by name.
std::vector<fs::path> collect(const std::vector<std::string>& inputs, const std::string& ext) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ext) found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p)) {
      out.push_back(p);
    } else {
      throw UsageError("no such file or directory: " + in);
    }
  }
  return out;
}

// Runs body(i) for i in [0, n) on up to `jobs` threads. The first exception
// is rethrown after all workers stop.
template <typename Body>
void parallel_for(std::size_t n, int jobs, Body body) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        {
          std::lock_guard lock(mu);
          if (failure) return;
        }
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    slt::write_file_atomic(out_path, text);
  }
}

// ---------------------------------------------------------------------------

struct SegmentArgs {
  std::string talk;
  std::string strategy = "fixed";
  double window = -1.0;
  double stride = slt::kDefaultStrideS;
  std::string trace;
  slt::ProbSplitConfig prob;
  std::string out;
};

int cmd_segment(const SegmentArgs& a) {
  const auto talk = slt::read_talk(a.talk);
  std::vector<slt::Span> spans;
  if (a.strategy == "gold") {
    spans = slt::gold_spans(talk);
  } else if (a.strategy == "fixed") {
    spans = slt::fixed_spans(talk.duration_s, a.window > 0 ? a.window : slt::kDefaultFixedWindowS);
  } else if (a.strategy == "merged" || a.strategy == "sliding") {
    spans = slt::sliding_spans(talk.duration_s, a.window > 0 ? a.window : slt::kDefaultSlidingWindowS, a.stride);
  } else if (a.strategy == "prob") {
    if (a.trace.empty()) throw UsageError("the prob strategy needs --trace");
    if (!fs::is_regular_file(a.trace)) throw UsageError("no such trace file: " + a.trace);
    spans = slt::fit_to_duration(slt::prob_spans(slt::read_trace(a.trace), a.prob), talk.duration_s);
  } else {
    throw UsageError("unknown strategy '" + a.strategy + "'");
  }
  std::ostringstream os;
  slt::write_spans(spans, os);
  emit(a.out, os.str());
  return 0;
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::vector<std::string> talks;
  std::string strategy = "gold";
  std::string backend = "mock:stable";
  double tick = 2.0;
  double window = -1.0;
  double stride = slt::kDefaultStrideS;
  double tau = 0.4;
  double backtrack_step = 0.1;
  int max_backtracks = 3;
  std::string merge_mode = "longest";
  std::size_t last_min_len = 3;
  std::size_t output_mask = 0;
  bool bias = false;
  double bias_beta = 0.25;
  int bias_mask = 5;
  std::string trace;
  slt::ProbSplitConfig prob;
  int beam_size = 4;
  int timeout_ms = static_cast<int>(slt::kDefaultBackendTimeout.count());
  std::string out;
  int jobs = 1;
};

int cmd_run(const RunArgs& a, const CLI::App& app) {
  slt::RunConfig config;
  const auto strategy = slt::parse_strategy(a.strategy);
  if (!strategy) throw UsageError("unknown strategy '" + a.strategy + "'");
  config.strategy = *strategy;
  config.tick_s = a.tick;
  if (a.window > 0) config.fixed_window_s = config.sliding_window_s = a.window;
  config.stride_s = a.stride;
  config.output_mask_k = a.output_mask;
  config.merge.tau = a.tau;
  config.merge.backtrack_step_s = a.backtrack_step;
  config.merge.max_backtracks = a.max_backtracks;
  config.merge.last_min_len = a.last_min_len;
  if (a.merge_mode == "longest") {
    config.merge.mode = slt::MergeMode::kLongest;
  } else if (a.merge_mode == "last") {
    config.merge.mode = slt::MergeMode::kLast;
  } else {
    throw UsageError("unknown merge mode '" + a.merge_mode + "'");
  }
  config.prob = a.prob;
  const bool bias_requested = a.bias || app.count("--bias-beta") > 0 || app.count("--bias-mask") > 0;
  if (bias_requested) config.bias = slt::BiasConfig{a.bias_beta, a.bias_mask};
  try {
    slt::validate(config);
  } catch (const slt::ParameterError& e) {
    throw UsageError(e.what());
  }

  const auto talk_files = collect(a.talks, ".talk");
  if (talk_files.empty()) throw UsageError("no talk files given");
  if (config.strategy == slt::Strategy::kProb && a.trace.empty()) throw UsageError("the prob strategy needs --trace");
  const bool single = talk_files.size() == 1 && !fs::is_directory(a.out);
  if (!single) {
    if (a.out.empty() || a.out == "-") throw UsageError("several talks need --out <directory>");
    fs::create_directories(a.out);
  }

  std::unique_ptr<slt::BackendFactory> factory;
  try {
    factory = std::make_unique<slt::BackendFactory>(a.backend, std::chrono::milliseconds(a.timeout_ms),
                                                    slt::BeamOptions{a.beam_size, 256});
  } catch (const slt::ParseError&) {
    throw;
  } catch (const slt::ParameterError& e) {
    throw UsageError(e.what());
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());  // unreadable lexicon
  }

  parallel_for(talk_files.size(), a.jobs, [&](std::size_t i) {
    const auto talk = slt::read_talk(talk_files[i]);
    std::optional<slt::ProbabilityTrace> trace;
    if (config.strategy == slt::Strategy::kProb) {
      // A trace directory holds <talk id>.prob files.
      fs::path tp = fs::is_directory(a.trace) ? fs::path(a.trace) / (talk.id + ".prob") : fs::path(a.trace);
      if (!fs::is_regular_file(tp)) throw UsageError("no such trace file: " + tp.string());
      trace = slt::read_trace(tp);
    }
    std::unique_ptr<slt::Translator> translator;
    try {
      translator = factory->create(talk);
    } catch (const std::runtime_error& e) {
      throw slt::TransportError(0, std::string("cannot start backend: ") + e.what());
    }
    const auto log = slt::run_talk(talk, config, *translator, trace ? &*trace : nullptr);
    std::ostringstream os;
    slt::write_update_log(log, os);
    if (single) {
      emit(a.out, os.str());
    } else {
      slt::write_file_atomic(fs::path(a.out) / (talk.id + ".log"), os.str());
    }
  });
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::vector<std::string> logs;
  std::string talks;
  bool legacy_delay = false;
  std::string out;
  int jobs = 1;
};

int cmd_eval(const EvalArgs& a) {
  const auto log_files = collect(a.logs, ".log");
  if (log_files.empty()) throw UsageError("no update logs found");
  if (!fs::is_directory(a.talks)) throw UsageError("talk directory not found: " + a.talks);

  std::vector<slt::MetricsReport> rows(log_files.size());
  parallel_for(log_files.size(), a.jobs, [&](std::size_t i) {
    const auto log = slt::read_update_log(log_files[i]);
    const auto talk_path = fs::path(a.talks) / (log.talk_id + ".talk");
    if (!fs::is_regular_file(talk_path)) throw UsageError("no talk file for log " + log_files[i].string());
    rows[i] = slt::evaluate(log, slt::read_talk(talk_path), {a.legacy_delay});
  });
  rows.push_back(slt::aggregate(rows));
  std::ostringstream os;
  slt::write_report_csv(rows, os);
  emit(a.out, os.str());
  return 0;
}

// ---------------------------------------------------------------------------

struct AugmentArgs {
  std::vector<std::string> talks;
  std::string variant = "prefix";
  std::uint64_t seed = 0;
  double min_s = 10.0;
  double max_s = 30.0;
  std::string out;
};

int cmd_augment(const AugmentArgs& a) {
  const auto talk_files = collect(a.talks, ".talk");
  if (talk_files.empty()) throw UsageError("no talk files given");
  if (a.variant == "window" && !(a.min_s > 0 && a.min_s < a.max_s)) throw UsageError("need 0 < --min < --max");
  std::vector<slt::TrainingExample> all;
  for (std::size_t i = 0; i < talk_files.size(); ++i) {
    const auto talk = slt::read_talk(talk_files[i]);
    // Each talk gets its own stream so adding a talk leaves the others unchanged.
    const std::uint64_t seed = a.seed + i;
    std::vector<slt::TrainingExample> ex;
    if (a.variant == "original") {
      ex = slt::make_originals(talk);
    } else if (a.variant == "prefix") {
      ex = slt::make_prefixes(talk, seed);
    } else if (a.variant == "context") {
      ex = slt::make_context(talk, seed);
    } else if (a.variant == "window") {
      ex = slt::make_originals(talk);
      const auto w = slt::make_windows(talk, seed, a.min_s, a.max_s);
      ex.insert(ex.end(), w.begin(), w.end());
    } else {
      throw UsageError("unknown variant '" + a.variant + "'");
    }
    all.insert(all.end(), ex.begin(), ex.end());
  }
  std::ostringstream os;
  slt::write_examples(all, os);
  emit(a.out, os.str());
  return 0;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> csvs;
  std::string out;
};

// One line per report: its name and the TOTAL row.
int cmd_report(const ReportArgs& a) {
  const auto files = collect(a.csvs, ".csv");
  if (files.empty()) throw UsageError("no reports given");
  std::ostringstream os;
  os << "run,bleu,flicker_total,flicker_norm,mean_delay_s,tokens,updates\n";
  for (const auto& f : files) {
    std::ifstream in(f);
    std::string line;
    std::string total;
    while (std::getline(in, line)) {
      if (line.rfind("TOTAL,", 0) == 0) total = line.substr(6);
    }
    if (total.empty()) throw slt::ValidationError(f.string() + ": no TOTAL row");
    os << f.stem().string() << ',' << total << '\n';
  }
  emit(a.out, os.str());
  return 0;
}

// ---------------------------------------------------------------------------

struct ConformArgs {
  std::string backend;
  int timeout_ms = 5000;
};

int cmd_conform(const ConformArgs& a) {
  if (!a.backend.starts_with("exec:") || a.backend.size() <= 5) throw UsageError("conform needs --backend exec:<command>");
  const auto checks = slt::run_conformance_suite(a.backend.substr(5), std::chrono::milliseconds(a.timeout_ms));
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.passed) std::cout << ": " << c.detail;
    std::cout << '\n';
    ok = ok && c.passed;
  }
  return ok ? 0 : kExitBackend;
}

void add_prob_options(CLI::App* cmd, slt::ProbSplitConfig& prob) {
  cmd->add_option("--max-len", prob.max_len_s, "Longest prob segment in seconds")->capture_default_str();
  cmd->add_option("--threshold", prob.threshold, "Boundary probability threshold")->capture_default_str();
  cmd->add_option("--min-len", prob.min_len_s, "Shortest prob segment in seconds")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming speech translation: segmentation, retranslation and evaluation"};
  app.require_subcommand(1);

  SegmentArgs seg;
  auto* segment = app.add_subcommand("segment", "Write the spans a strategy produces for a talk");
  segment->add_option("talk", seg.talk, "Talk file")->required();
  segment->add_option("--strategy", seg.strategy, "gold, prob, fixed or merged")->capture_default_str();
  segment->add_option("--window", seg.window, "Window length in seconds (fixed 26, merged 15)");
  segment->add_option("--stride", seg.stride, "Sliding-window stride in seconds")->capture_default_str();
  segment->add_option("--trace", seg.trace, "Boundary probability trace (prob)");
  add_prob_options(segment, seg.prob);
  segment->add_option("-o,--out", seg.out, "Output file (default stdout)");

  RunArgs run;
  auto* runc = app.add_subcommand("run", "Simulate retranslation and write update logs");
  runc->add_option("talks", run.talks, "Talk files or directories")->required();
  runc->add_option("--strategy", run.strategy, "gold, prob, fixed or merged")->capture_default_str();
  runc->add_option("--backend", run.backend,
                   "mock:stable, mock:unstable[:tail=K,drift=P], toy-beam:<lexicon> or exec:<command>")
      ->capture_default_str();
  runc->add_option("--tick", run.tick, "Retranslation interval in seconds")->capture_default_str();
  runc->add_option("--window", run.window, "Window length in seconds (fixed 26, merged 15)");
  runc->add_option("--stride", run.stride, "Merged-window stride in seconds")->capture_default_str();
  runc->add_option("--tau", run.tau, "Merge threshold ratio")->capture_default_str();
  runc->add_option("--backtrack-step", run.backtrack_step, "Seconds per backtrack")->capture_default_str();
  runc->add_option("--max-backtracks", run.max_backtracks, "Backtracks per window")->capture_default_str();
  runc->add_option("--merge-mode", run.merge_mode, "longest or last")->capture_default_str();
  runc->add_option("--last-min-len", run.last_min_len, "Shortest match in last mode")->capture_default_str();
  runc->add_option("--output-mask", run.output_mask, "Hide the last K tokens of partial output")->capture_default_str();
  runc->add_flag("--bias", run.bias, "Bias each retranslation toward the previous one");
  runc->add_option("--bias-beta", run.bias_beta, "Bias interpolation weight (implies --bias)")->capture_default_str();
  runc->add_option("--bias-mask", run.bias_mask, "Unbiased trailing tokens (implies --bias)")->capture_default_str();
  runc->add_option("--trace", run.trace, "Trace file, or directory of <talk>.prob files (prob)");
  add_prob_options(runc, run.prob);
  runc->add_option("--beam-size", run.beam_size, "Beam size for toy-beam")->capture_default_str();
  runc->add_option("--timeout-ms", run.timeout_ms, "Per-request backend timeout")->capture_default_str();
  runc->add_option("-o,--out", run.out, "Output log file, or directory for several talks");
  runc->add_option("-j,--jobs", run.jobs, "Talks processed in parallel")->capture_default_str();

  EvalArgs ev;
  auto* evalc = app.add_subcommand("eval", "Score update logs: BLEU, flicker and delay");
  evalc->add_option("logs", ev.logs, "Update logs or directories")->required();
  evalc->add_option("--talks", ev.talks, "Directory with <talk>.talk files")->required();
  evalc->add_flag("--legacy-delay", ev.legacy_delay, "Time tokens by the first occurrence of their type");
  evalc->add_option("-o,--out", ev.out, "CSV output file (default stdout)");
  evalc->add_option("-j,--jobs", ev.jobs, "Talks scored in parallel")->capture_default_str();

  AugmentArgs aug;
  auto* augc = app.add_subcommand("augment", "Synthesize training examples from talks");
  augc->add_option("talks", aug.talks, "Talk files or directories")->required();
  augc->add_option("--variant", aug.variant, "original, prefix, context or window")->capture_default_str();
  augc->add_option("--seed", aug.seed, "Random seed")->capture_default_str();
  augc->add_option("--min", aug.min_s, "Shortest window in seconds")->capture_default_str();
  augc->add_option("--max", aug.max_s, "Longest window in seconds")->capture_default_str();
  augc->add_option("-o,--out", aug.out, "TSV output file (default stdout)");

  ReportArgs rep;
  auto* repc = app.add_subcommand("report", "Collect the TOTAL rows of several eval reports");
  repc->add_option("csvs", rep.csvs, "Report files or directories")->required();
  repc->add_option("-o,--out", rep.out, "CSV output file (default stdout)");

  ConformArgs conf;
  auto* confc = app.add_subcommand("conform", "Check an external backend against the wire protocol");
  confc->add_option("--backend", conf.backend, "exec:<command>")->required();
  confc->add_option("--timeout-ms", conf.timeout_ms, "Per-check timeout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*segment) return cmd_segment(seg);
    if (*runc) return cmd_run(run, *runc);
    if (*evalc) return cmd_eval(ev);
    if (*augc) return cmd_augment(aug);
    if (*repc) return cmd_report(rep);
    if (*confc) return cmd_conform(conf);
  } catch (const UsageError& e) {
    std::cerr << "sltkit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const slt::ParameterError& e) {
    std::cerr << "sltkit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const slt::TransportError& e) {
    std::cerr << "sltkit: backend failure: " << e.what() << '\n';
    return kExitBackend;
  } catch (const slt::ParseError& e) {
    std::cerr << "sltkit: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const slt::ValidationError& e) {
    std::cerr << "sltkit: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "sltkit: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
