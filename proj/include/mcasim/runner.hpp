// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "mcasim/config.hpp"

namespace mcasim {

struct RunnerOptions {
  std::string out_dir = "mcasim_out";
  int jobs = 0;  // 0 = hardware concurrency
  bool quiet = false;
  std::string config_path = "defaults";
};

// Everything a scenario produces, before touching the filesystem.
struct ScenarioOutputs {
  std::map<std::string, std::string> csv_files;  // filename -> contents
  nlohmann::json summary;
  std::vector<std::string> warnings;
};

// Stable FNV-1a hash of the resolved config echo, hex-encoded.
std::string config_hash(const ScenarioConfig& cfg);

// Per-replication seed: first word of the substream labeled "run:<i>", so
// adding runs never perturbs earlier ones.
std::uint64_t run_seed(std::uint64_t master_seed, int run_index);

// Executes all replications (up to `jobs` in parallel; merge order is by run
// index, independent of completion order) and renders CSV + summary.
ScenarioOutputs execute_scenario(const ScenarioConfig& cfg, int jobs = 0);

// Manifest, written before the simulation starts.
nlohmann::json build_manifest(const ScenarioConfig& cfg, const RunnerOptions& opt);

// Full pipeline: manifest, runs, CSV + summary.json + manifest.json under
// opt.out_dir. Returns a process exit code.
int run_scenario(const ScenarioConfig& cfg, const RunnerOptions& opt);

// CLI entry point (exposed for tests; tools/mcasim wraps it).
int cli_main(int argc, const char* const* argv);

}  // namespace mcasim
