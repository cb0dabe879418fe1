// Copyright 2026 The rieszlab Authors
// SPDX-License-Identifier: Apache-2.0

// rieszlab <subcommand> --config <file.json> --out <dir> [--timing]
//
// Exit status: 0 when the verdict matches the configured expectation, 1 on a
// mismatch, 2 on invalid input.

#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "rieszlab/error.hpp"
#include "rieszlab/harness/config.hpp"
#include "rieszlab/harness/experiments.hpp"
#include "rieszlab/harness/report.hpp"

namespace {

constexpr int kInvalid = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace rieszlab;
  CLI::App app{"rieszlab: modified Riesz potential, maximal function and Orlicz experiments"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_dir;
  bool timing = false;
  for (const auto& name : harness::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "JSON configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_flag("--timing", timing, "add wall-clock runtime to report.json");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }
  const std::string name = app.get_subcommands().front()->get_name();

  try {
    const auto start = std::chrono::steady_clock::now();
    const auto cfg = harness::load_config(config_path);
    auto result = harness::run_experiment(name, cfg);
    if (timing) {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
      result.report["runtime_s"] = dt.count();
    }
    harness::write_outputs(out_dir, result);
    const int code = harness::verdict_exit_code(result, cfg.expect);
    std::cout << name << ": verdict " << result.verdict;
    if (cfg.expect) std::cout << " (expected " << *cfg.expect << ")";
    if (!result.checks_pass) std::cout << ", internal checks failed";
    std::cout << '\n';
    return code;
  } catch (const InputError& e) {
    std::cerr << "rieszlab: invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const NumericError& e) {
    std::cerr << "rieszlab: numeric failure: " << e.what() << '\n';
    return kInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "rieszlab: invalid input: " << e.what() << '\n';
    return kInvalid;
  }
}
