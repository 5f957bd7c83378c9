// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcasim/errors.hpp"
#include "mcasim/metrics.hpp"
#include "mcasim/radio.hpp"

namespace mcasim::ccselect {

enum class Metric { Rsrp, Rsrq, Load };

// Piecewise-linear membership: score_at_low at low_anchor, score_at_high at
// high_anchor, linear between, clamped outside. Monotone in the metric.
struct Rule {
  Metric metric = Metric::Rsrp;
  double low_anchor = -120.0;
  double high_anchor = -60.0;
  double score_at_low = 0.0;
  double score_at_high = 1.0;

  double evaluate(double metric_value) const;
  void validate(const std::string& where) const;
};

struct UeMeasurement {
  std::optional<double> rsrp_dbm;
  std::optional<double> rsrq_db;
  std::optional<double> load_fraction;
};

// Rule score for one CC measurement; missing metric is an error.
double evaluate_rule(const Rule& rule, const UeMeasurement& m);

// Arithmetic mean; empty input is an error.
double aggregate_scores(std::span<const double> scores);

struct Policy {
  std::string name;
  std::vector<Rule> rules;
  double threshold = 0.5;
  int max_ccs = 5;

  void validate(const std::string& where) const;

  static Policy rsrp_baseline();
  static Policy rsrq_load_proposed();
};

// One component carrier as seen by the selector.
struct CcCandidate {
  int cell_index = 0;  // (site*sectors + sector)*ccs + cc
  int site = 0;
  int sector = 0;
  int cc = 0;
  UeMeasurement measurement;
  int load = 0;
  int capacity = 0;
};

enum class CellRole { PCell, PSCell, SCell };

struct Assignment {
  struct Entry {
    int cell_index;
    int site;
    double score;
    CellRole role;
  };
  std::vector<Entry> cells;  // ordered by selection rank
  bool blocked() const { return cells.empty(); }
};

// Scores every candidate with headroom, keeps those at or above the policy
// threshold (ranked by score, then lower load, lower cc index, lower sector,
// lower site), capped at max_ccs. When nothing clears the threshold the
// single top-scoring CC is assigned anyway. Empty result means blocked.
Assignment select_ccs(std::span<const CcCandidate> candidates, const Policy& policy);

struct Config {
  int site_count = 12;
  double isd_m = 500.0;
  int sectors_per_site = 3;
  int ccs_per_sector = 5;
  double cc_bandwidth_hz = 1.4e6;
  double cc_tx_power_dbm = 39.0;
  double antenna_gain_dbi = 14.0;
  double antenna_theta3db_deg = 65.0;
  double antenna_backoff_db = 20.0;
  int capacity_per_cc = 10;
  double noise_figure_db = 9.0;
  PathlossModel pathloss = PathlossModel::macro();

  int ue_count = 300;
  double hotspot_fraction = 0.5;
  double hotspot_radius_m = 120.0;
  // Hotspot disc center in polar form around site 0. The default bearing is
  // the boundary between site 0's first two sectors and the default range is
  // half the ISD, which drops the dense cluster over two adjacent sectors at
  // the edge between neighbouring sites.
  double hotspot_range_m = 250.0;
  double hotspot_bearing_deg = 30.0;
  // Measurement reporting range: a UE only reports CCs received above this
  // floor and within report_margin_db of its strongest sector, so cells it
  // cannot usefully hear never become candidates.
  double min_rsrp_dbm = -105.0;
  double report_margin_db = 20.0;
  bool keep_details = false;  // retain per-UE outcomes

  double threshold = 0.5;
  // Anchors for the three rule families, overridable from config.
  Rule rsrp_rule{Metric::Rsrp, -120.0, -60.0, 0.0, 1.0};
  Rule rsrq_rule{Metric::Rsrq, -19.5, -3.0, 0.0, 1.0};
  Rule load_rule{Metric::Load, 0.0, 1.0, 1.0, 0.0};
  int max_ccs = 5;

  void validate() const;
  Policy baseline_policy() const;
  Policy proposed_policy() const;
};

struct UeOutcome {
  int ue = 0;
  bool hotspot = false;
  bool blocked = false;
  std::vector<int> cells;  // assigned cell indices, selection order
  double throughput_bps = 0.0;
};

struct PolicyResult {
  std::string policy;
  std::int64_t ues = 0;
  std::int64_t blocked = 0;
  double jain_index = 0.0;
  EmpiricalDistribution throughput_all;                 // bit/s, every served UE
  std::vector<EmpiricalDistribution> throughput_by_ccs;  // index 0 -> 1 CC
  std::vector<int> final_loads;                          // per cell index
  std::vector<UeOutcome> outcomes;  // populated when cfg.keep_details
  double blocked_fraction() const;
};

struct ExperimentResult {
  PolicyResult baseline;
  PolicyResult proposed;
};

// Jain's fairness index over a load vector: (sum x)^2 / (n * sum x^2).
double jain_fairness(std::span<const int> loads);

ExperimentResult run_experiment(const Config& cfg, std::uint64_t master_seed);

}  // namespace mcasim::ccselect
