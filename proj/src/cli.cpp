// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mcasim/runner.hpp"
#include "mcasim/version.hpp"

namespace mcasim {

namespace {

struct CliArgs {
  std::string config = "defaults";
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<std::int64_t> samples;
  std::string out;
  int jobs = 0;
  bool quiet = false;
};

void add_common(CLI::App* sub, CliArgs& args) {
  sub->add_option("--config", args.config,
                  "Config file (JSON), or the literal 'defaults'")
      ->required();
  sub->add_option("--seed", args.seed, "Master seed (overrides the config)");
  sub->add_option("--runs", args.runs, "Replication count (overrides the config)");
  sub->add_option("--samples", args.samples,
                  "Override the mechanism's sample budget (packets / UEs / episodes)");
  sub->add_option("--out", args.out, "Output directory (default: $MCASIM_OUT or mcasim_out)");
  sub->add_option("--jobs", args.jobs, "Max concurrent replications (0 = all cores)");
  sub->add_flag("--quiet", args.quiet, "Suppress progress output");
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"mcasim - slot-based simulator of multi-channel access RRM mechanisms"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CliArgs args;
  Mechanism mechanism = Mechanism::Dupstat;
  for (const auto mech : {Mechanism::Dupstat, Mechanism::Ccselect, Mechanism::Mecassoc,
                          Mechanism::Compcoord}) {
    CLI::App* sub = app.add_subcommand(mechanism_name(mech));
    add_common(sub, args);
    sub->callback([&args, &mechanism, mech] { mechanism = mech; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // 0
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);  // 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    ScenarioConfig cfg = load_config(args.config, mechanism);
    if (args.seed) cfg.master_seed = *args.seed;
    if (args.runs) cfg.runs = *args.runs;
    if (args.samples) cfg.apply_sample_budget(*args.samples);
    cfg.validate();

    RunnerOptions opt;
    opt.config_path = args.config;
    opt.jobs = args.jobs;
    opt.quiet = args.quiet;
    if (!args.out.empty()) {
      opt.out_dir = args.out;
    } else if (const char* env = std::getenv("MCASIM_OUT"); env && *env) {
      opt.out_dir = env;
    }
    return run_scenario(cfg, opt);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace mcasim
