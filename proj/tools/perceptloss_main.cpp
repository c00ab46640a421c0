// tools/perceptloss_main.cpp

// Copyright 2026  Perceptloss Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Batch evaluator:
//   perceptloss eval --manifest pairs.csv --config cfg.json --out results/
//                    [--dump-f0] [--workers N]
//
// Writes pairs.csv, summary.json and (optionally) per-utterance F0 dumps
// under --out. Exit status: 0 if at least one pair succeeded, 2 if every
// pair failed, 1 on usage or configuration errors. When --config is not
// given, the PERCEPTLOSS_CONFIG environment variable names the config;
// with neither, built-in defaults apply.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "perceptloss/perceptloss.hpp"

namespace {

int run_eval(const std::string& manifest_path, const std::string& config_path,
             const std::string& out_dir, bool dump_f0_flag,
             std::optional<int> workers_flag) {
  using namespace perceptloss;

  EvalConfig cfg;
  try {
    std::string cfg_path = config_path;
    if (cfg_path.empty()) {
      if (const char* env = std::getenv("PERCEPTLOSS_CONFIG")) cfg_path = env;
    }
    if (!cfg_path.empty()) cfg = load_config(cfg_path);
    if (dump_f0_flag) cfg.dump_f0 = true;
    if (workers_flag) {
      cfg.worker_count = *workers_flag;
      cfg.validate();
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  std::vector<PairEntry> entries;
  try {
    entries = parse_manifest(manifest_path);
  } catch (const std::exception& e) {
    std::cerr << "manifest error: " << e.what() << "\n";
    return 1;
  }

  std::optional<Scorer> scorer;
  if (cfg.scorer_weights_path) {
    try {
      scorer = load_scorer(*cfg.scorer_weights_path);
    } catch (const std::exception& e) {
      std::cerr << "scorer error: " << e.what() << "\n";
      return 1;
    }
  }

  std::vector<PairReport> reports;
  try {
    reports = run_batch(entries, cfg, scorer ? &*scorer : nullptr);
    write_batch_outputs(out_dir, reports);
  } catch (const std::exception& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return 1;
  }

  std::size_t ok = 0;
  for (const PairReport& r : reports) {
    if (r.succeeded()) ++ok;
    else std::cerr << "pair " << r.pair_id << ": " << r.error << "\n";
  }
  std::cerr << ok << "/" << reports.size() << " pairs succeeded\n";
  return ok > 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perceptual quality metrics for voice-conversion evaluation"};
  app.require_subcommand(1);

  std::string manifest_path, config_path, out_dir;
  bool dump_f0 = false;
  int workers = 0;

  CLI::App* eval = app.add_subcommand("eval", "evaluate a manifest of audio pairs");
  eval->add_option("--manifest", manifest_path, "CSV manifest of pairs")->required();
  eval->add_option("--config", config_path, "JSON evaluation config");
  eval->add_option("--out", out_dir, "output directory")->required();
  eval->add_flag("--dump-f0", dump_f0, "write per-utterance F0 contour CSVs");
  eval->add_option("--workers", workers, "worker thread count")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  return run_eval(manifest_path, config_path, out_dir, dump_f0,
                  workers > 0 ? std::optional<int>(workers) : std::nullopt);
}
