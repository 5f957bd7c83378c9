// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include "mcasim/runner.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "mcasim/csv.hpp"
#include "mcasim/version.hpp"

namespace mcasim {

namespace {

using nlohmann::json;

template <typename ResultT, typename Fn>
std::vector<ResultT> parallel_map_runs(int runs, int jobs, Fn&& fn) {
  std::vector<ResultT> results(static_cast<std::size_t>(runs));
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  jobs = std::min(jobs, runs);
  if (jobs == 1) {
    for (int i = 0; i < runs; ++i) results[static_cast<std::size_t>(i)] = fn(i);
    return results;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= runs) return;
      try {
        results[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

json dist_stats(const EmpiricalDistribution& d) {
  if (d.empty()) return json{{"count", 0}};
  return json{{"count", d.count()}, {"mean", d.mean()},   {"p5", d.percentile(5)},
              {"p50", d.percentile(50)}, {"p95", d.percentile(95)}};
}

// ---------------------------------------------------------------- dupstat

ScenarioOutputs exec_dupstat(const ScenarioConfig& cfg, int jobs) {
  auto results = parallel_map_runs<dupstat::ExperimentResult>(
      cfg.runs, jobs,
      [&](int i) { return dupstat::run_experiment(cfg.dup, run_seed(cfg.master_seed, i)); });

  ScenarioOutputs out;
  json per_run = json::array();
  std::vector<dupstat::ModeResult> merged;
  for (int i = 0; i < cfg.runs; ++i) {
    const auto& res = results[static_cast<std::size_t>(i)];
    json run{{"run", i}, {"seed", run_seed(cfg.master_seed, i)}};
    for (const auto& m : res.modes) {
      const auto o3 = m.latency_slots.outage(1e-3);
      const auto ot = m.latency_slots.outage(cfg.dup.outage_target);
      run["modes"][dupstat::mode_name(m.mode)] = json{
          {"tx_per_delivered", m.tx_per_delivered()},
          {"latency_p50", m.latency_slots.percentile(50)},
          {"latency_at_outage_1e-3", o3.value},
          {"latency_at_outage_target", ot.value},
          {"outage_target_reliable", ot.reliable},
      };
    }
    per_run.push_back(std::move(run));
    if (i == 0) {
      merged = std::move(results[static_cast<std::size_t>(i)].modes);
    } else {
      for (std::size_t k = 0; k < merged.size(); ++k) {
        auto& dst = merged[k];
        auto& src = results[static_cast<std::size_t>(i)].modes[k];
        dst.packets += src.packets;
        dst.delivered += src.delivered;
        dst.transmissions += src.transmissions;
        dst.failed_attempts += src.failed_attempts;
        dst.reports_emitted += src.reports_emitted;
        dst.latency_slots.merge(src.latency_slots);
      }
    }
  }

  const double p = cfg.dup.link.outage_probability();
  CsvWriter csv;
  csv.header({"mode", "packets", "tx_per_delivered", "latency_p50",
              "latency_at_outage_1e-3", "latency_at_outage_target",
              "analytic_latency_at_target"});
  json merged_json;
  for (const auto& m : merged) {
    const int links = m.mode == dupstat::Mode::SingleConnectivity
                          ? 1
                          : cfg.dup.duplication_set_size;
    const auto o3 = m.latency_slots.outage(1e-3);
    const auto ot = m.latency_slots.outage(cfg.dup.outage_target);
    const std::int64_t analytic = dupstat::analytic_outage_latency_slots(
        p, links, cfg.dup.outage_target, cfg.dup.harq_rtt_slots);
    if (!ot.reliable) {
      out.warnings.push_back(std::string(dupstat::mode_name(m.mode)) +
                             ": sample budget too small for the requested outage "
                             "quantile; value flagged unreliable");
    }
    csv.field(std::string(dupstat::mode_name(m.mode)))
        .field(m.packets)
        .field(m.tx_per_delivered())
        .field(m.latency_slots.percentile(50))
        .field(o3.value)
        .field(ot.value)
        .field(static_cast<std::int64_t>(analytic));
    csv.end_row();
    merged_json[dupstat::mode_name(m.mode)] = json{
        {"packets", m.packets},
        {"delivered", m.delivered},
        {"transmissions", m.transmissions},
        {"reports_emitted", m.reports_emitted},
        {"empirical_attempt_failure", m.empirical_attempt_failure()},
        {"tx_per_delivered", m.tx_per_delivered()},
        {"latency_p50", m.latency_slots.percentile(50)},
        {"latency_at_outage_1e-3", o3.value},
        {"latency_at_outage_target", ot.value},
        {"outage_target_reliable", ot.reliable},
        {"analytic_latency_at_target", analytic},
        {"analytic_attempt_failure", std::pow(p, links)},
    };
  }
  out.csv_files["dupstat_results.csv"] = csv.str();
  out.summary["per_run"] = std::move(per_run);
  out.summary["merged"] = std::move(merged_json);
  return out;
}

// --------------------------------------------------------------- ccselect

json ccselect_policy_json(const ccselect::PolicyResult& r) {
  json j{{"blocked_fraction", r.blocked_fraction()},
         {"jain_index", r.jain_index},
         {"throughput", dist_stats(r.throughput_all)}};
  return j;
}

ScenarioOutputs exec_ccselect(const ScenarioConfig& cfg, int jobs) {
  auto results = parallel_map_runs<ccselect::ExperimentResult>(
      cfg.runs, jobs,
      [&](int i) { return ccselect::run_experiment(cfg.cc, run_seed(cfg.master_seed, i)); });

  ScenarioOutputs out;
  json per_run = json::array();
  ccselect::PolicyResult base_merged, prop_merged;
  std::vector<double> base_jains, prop_jains;
  for (int i = 0; i < cfg.runs; ++i) {
    auto& res = results[static_cast<std::size_t>(i)];
    per_run.push_back(json{{"run", i},
                           {"seed", run_seed(cfg.master_seed, i)},
                           {"baseline", ccselect_policy_json(res.baseline)},
                           {"proposed", ccselect_policy_json(res.proposed)}});
    base_jains.push_back(res.baseline.jain_index);
    prop_jains.push_back(res.proposed.jain_index);
    auto fold = [](ccselect::PolicyResult& dst, ccselect::PolicyResult& src, bool first) {
      if (first) {
        dst = std::move(src);
        return;
      }
      dst.ues += src.ues;
      dst.blocked += src.blocked;
      dst.throughput_all.merge(src.throughput_all);
      for (std::size_t b = 0; b < dst.throughput_by_ccs.size() &&
                              b < src.throughput_by_ccs.size();
           ++b)
        dst.throughput_by_ccs[b].merge(src.throughput_by_ccs[b]);
    };
    fold(base_merged, res.baseline, i == 0);
    fold(prop_merged, res.proposed, i == 0);
  }
  auto mean_of = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  base_merged.jain_index = mean_of(base_jains);
  prop_merged.jain_index = mean_of(prop_jains);

  CsvWriter csv;
  csv.header({"policy", "n_ccs", "p5", "p50", "p95", "blocked_fraction", "jain_index"});
  json merged_json;
  for (const auto* r : {&base_merged, &prop_merged}) {
    auto row = [&](const std::string& bucket, const EmpiricalDistribution& d) {
      csv.field(r->policy).field(bucket);
      if (d.empty()) {
        csv.field("nan").field("nan").field("nan");
      } else {
        csv.field(d.percentile(5)).field(d.percentile(50)).field(d.percentile(95));
      }
      csv.field(r->blocked_fraction()).field(r->jain_index);
      csv.end_row();
    };
    row("all", r->throughput_all);
    json buckets;
    for (std::size_t b = 0; b < r->throughput_by_ccs.size(); ++b) {
      row(std::to_string(b + 1), r->throughput_by_ccs[b]);
      buckets[std::to_string(b + 1)] = dist_stats(r->throughput_by_ccs[b]);
    }
    merged_json[r->policy] = json{{"blocked_fraction", r->blocked_fraction()},
                                  {"jain_index_mean", r->jain_index},
                                  {"throughput", dist_stats(r->throughput_all)},
                                  {"throughput_by_ccs", std::move(buckets)}};
  }
  out.csv_files["ccselect_results.csv"] = csv.str();
  out.summary["per_run"] = std::move(per_run);
  out.summary["merged"] = std::move(merged_json);
  return out;
}

// --------------------------------------------------------------- mecassoc

ScenarioOutputs exec_mecassoc(const ScenarioConfig& cfg, int jobs) {
  auto results = parallel_map_runs<mecassoc::ExperimentResult>(
      cfg.runs, jobs,
      [&](int i) { return mecassoc::run_experiment(cfg.mec, run_seed(cfg.master_seed, i)); });

  ScenarioOutputs out;
  json per_run = json::array();
  mecassoc::ExperimentResult merged;
  for (int i = 0; i < cfg.runs; ++i) {
    auto& res = results[static_cast<std::size_t>(i)];
    per_run.push_back(json{{"run", i},
                           {"seed", run_seed(cfg.master_seed, i)},
                           {"coupled", dist_stats(res.coupled.e_pdb_s)},
                           {"decoupled", dist_stats(res.decoupled.e_pdb_s)}});
    if (i == 0) {
      merged = std::move(res);
    } else {
      merged.coupled.e_pdb_s.merge(res.coupled.e_pdb_s);
      merged.decoupled.e_pdb_s.merge(res.decoupled.e_pdb_s);
    }
  }

  CsvWriter csv;
  csv.header({"rule", "p50_epdb", "p95_epdb"});
  CsvWriter ccdf;
  ccdf.header({"rule", "value", "ccdf"});
  for (const auto* r : {&merged.coupled, &merged.decoupled}) {
    csv.field(r->rule)
        .field(r->e_pdb_s.percentile(50))
        .field(r->e_pdb_s.percentile(95));
    csv.end_row();
    for (const auto& [value, c] : r->e_pdb_s.ccdf_points()) {
      ccdf.field(r->rule).field(value).field(c);
      ccdf.end_row();
    }
  }
  const double reduction =
      1.0 - merged.decoupled.e_pdb_s.percentile(50) / merged.coupled.e_pdb_s.percentile(50);
  out.csv_files["mecassoc_results.csv"] = csv.str();
  out.csv_files["mecassoc_ccdf.csv"] = ccdf.str();
  out.summary["per_run"] = std::move(per_run);
  out.summary["merged"] = json{{"omega", merged.omega},
                               {"coupled", dist_stats(merged.coupled.e_pdb_s)},
                               {"decoupled", dist_stats(merged.decoupled.e_pdb_s)},
                               {"median_epdb_reduction", reduction}};
  return out;
}

// -------------------------------------------------------------- compcoord

ScenarioOutputs exec_compcoord(const ScenarioConfig& cfg, int jobs) {
  auto results = parallel_map_runs<compcoord::ExperimentResult>(
      cfg.runs, jobs,
      [&](int i) { return compcoord::run_experiment(cfg.comp, run_seed(cfg.master_seed, i)); });

  ScenarioOutputs out;
  json per_run = json::array();
  compcoord::ExperimentResult merged;
  for (int i = 0; i < cfg.runs; ++i) {
    auto& res = results[static_cast<std::size_t>(i)];
    json run{{"run", i}, {"seed", run_seed(cfg.master_seed, i)}};
    run["llu"] = json{{"cooperative", dist_stats(res.cooperative_llu)},
                      {"baseline", dist_stats(res.baseline_llu)},
                      {"reduction", res.llu_latency_reduction()}};
    run["ltu"] = json{{"cooperative", dist_stats(res.cooperative_ltu)},
                      {"baseline", dist_stats(res.baseline_ltu)}};
    per_run.push_back(std::move(run));
    if (i == 0) {
      merged = std::move(res);
    } else {
      merged.episodes += res.episodes;
      merged.dc_random_picks += res.dc_random_picks;
      merged.dc_random_picks_user0 += res.dc_random_picks_user0;
      merged.cooperative_llu.merge(res.cooperative_llu);
      merged.baseline_llu.merge(res.baseline_llu);
      merged.cooperative_ltu.merge(res.cooperative_ltu);
      merged.baseline_ltu.merge(res.baseline_ltu);
      for (std::size_t s = 0; s < merged.by_scheme_class.size(); ++s)
        for (std::size_t c = 0; c < 2; ++c) {
          merged.by_scheme_class[s][c].cooperative.merge(
              res.by_scheme_class[s][c].cooperative);
          merged.by_scheme_class[s][c].baseline.merge(res.by_scheme_class[s][c].baseline);
        }
    }
  }

  CsvWriter csv;
  csv.header({"scheme", "user_class", "avg_two_way_latency_slots", "p99_latency",
              "episodes"});
  auto row = [&](const char* scheme, const char* cls, const EmpiricalDistribution& d) {
    csv.field(std::string(scheme)).field(std::string(cls));
    if (d.empty()) {
      csv.field("nan").field("nan").field(std::int64_t{0});
    } else {
      csv.field(d.mean())
          .field(d.percentile(99))
          .field(static_cast<std::int64_t>(d.count()));
    }
    csv.end_row();
  };
  row("sc_baseline", "llu", merged.baseline_llu);
  row("sc_baseline", "ltu", merged.baseline_ltu);
  for (auto scheme : {compcoord::Scheme::DualConnectivity,
                      compcoord::Scheme::JointTransmission,
                      compcoord::Scheme::InterferenceCancellation}) {
    row(compcoord::scheme_name(scheme), "llu",
        merged.by_scheme_class[static_cast<std::size_t>(scheme)][0].cooperative);
    row(compcoord::scheme_name(scheme), "ltu",
        merged.by_scheme_class[static_cast<std::size_t>(scheme)][1].cooperative);
  }
  out.csv_files["compcoord_results.csv"] = csv.str();
  out.summary["per_run"] = std::move(per_run);
  out.summary["merged"] =
      json{{"episodes", merged.episodes},
           {"llu",
            json{{"cooperative", dist_stats(merged.cooperative_llu)},
                 {"baseline", dist_stats(merged.baseline_llu)},
                 {"reduction", merged.llu_latency_reduction()}}},
           {"ltu",
            json{{"cooperative", dist_stats(merged.cooperative_ltu)},
                 {"baseline", dist_stats(merged.baseline_ltu)}}},
           {"dc_random_picks", merged.dc_random_picks},
           {"dc_random_picks_user0", merged.dc_random_picks_user0}};
  return out;
}

}  // namespace

std::string config_hash(const ScenarioConfig& cfg) {
  const std::uint64_t h = fnv1a64(cfg.echo().dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t run_seed(std::uint64_t master_seed, int run_index) {
  return RngStream(master_seed, "run:" + std::to_string(run_index)).next_u64();
}

ScenarioOutputs execute_scenario(const ScenarioConfig& cfg, int jobs) {
  cfg.validate();
  ScenarioOutputs out;
  switch (cfg.mechanism) {
    case Mechanism::Dupstat: out = exec_dupstat(cfg, jobs); break;
    case Mechanism::Ccselect: out = exec_ccselect(cfg, jobs); break;
    case Mechanism::Mecassoc: out = exec_mecassoc(cfg, jobs); break;
    case Mechanism::Compcoord: out = exec_compcoord(cfg, jobs); break;
  }
  out.summary["tool_version"] = kVersion;
  out.summary["mechanism"] = mechanism_name(cfg.mechanism);
  out.summary["master_seed"] = cfg.master_seed;
  out.summary["runs"] = cfg.runs;
  out.summary["config"] = cfg.echo();
  out.summary["config_hash"] = config_hash(cfg);
  out.summary["defaulted_fields"] = cfg.defaulted_fields;
  out.summary["warnings"] = out.warnings;
  return out;
}

nlohmann::json build_manifest(const ScenarioConfig& cfg, const RunnerOptions& opt) {
  return nlohmann::json{
      {"tool_version", kVersion},
      {"mechanism", mechanism_name(cfg.mechanism)},
      {"config_path", opt.config_path},
      {"config_hash", config_hash(cfg)},
      {"master_seed", cfg.master_seed},
      {"runs", cfg.runs},
      {"out_dir", opt.out_dir},
  };
}

int run_scenario(const ScenarioConfig& cfg, const RunnerOptions& opt) {
  namespace fs = std::filesystem;
  fs::create_directories(opt.out_dir);
  auto write = [&](const std::string& name, const std::string& contents) {
    std::ofstream f(fs::path(opt.out_dir) / name, std::ios::binary);
    if (!f) throw SimulationError("cannot write " + name + " under " + opt.out_dir);
    f << contents;
  };
  write("manifest.json", build_manifest(cfg, opt).dump(2) + "\n");

  const ScenarioOutputs out = execute_scenario(cfg, opt.jobs);
  for (const auto& [name, contents] : out.csv_files) write(name, contents);
  write("summary.json", out.summary.dump(2) + "\n");

  if (!opt.quiet) {
    for (const auto& w : out.warnings)
      std::fprintf(stderr, "warning: %s\n", w.c_str());
    std::printf("%s: %d run%s -> %s\n", mechanism_name(cfg.mechanism), cfg.runs,
                cfg.runs == 1 ? "" : "s", opt.out_dir.c_str());
  }
  return 0;
}

}  // namespace mcasim
