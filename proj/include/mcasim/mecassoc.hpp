// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcasim/errors.hpp"
#include "mcasim/metrics.hpp"
#include "mcasim/radio.hpp"

namespace mcasim::mecassoc {

enum class Tier { Macro, Small };

// Radio node with its collocated MEC server (work-conserving FIFO queue).
struct NodeSite {
  int id = 0;
  Tier tier = Tier::Macro;
  double x = 0.0, y = 0.0;
  double tx_power_dbm = 46.0;
  double cpu_cycles_per_s = 1e10;
  double queued_cycles = 0.0;
};

struct UePoint {
  double x = 0.0, y = 0.0;
};

struct OffloadTask {
  double input_bits = 1e6;
  double cycles_per_bit = 1000.0;
  double cycles() const { return input_bits * cycles_per_bit; }
};

struct AssociationDecision {
  int dl_node = -1;
  int ul_node = -1;
  bool coupled() const { return dl_node == ul_node; }
};

struct Config {
  double region_radius_m = 500.0;
  int small_count = 12;
  int ue_count = 300;
  double macro_tx_dbm = 46.0;
  double small_tx_dbm = 30.0;
  double ue_tx_dbm = 23.0;
  double ul_bandwidth_hz = 10e6;
  double noise_figure_db = 9.0;
  double c_small_cycles_per_s = 5e9;
  double omega = 2.0;  // (P_macro/P_small) linear over (C_macro/C_small)
  double task_bits = 1e6;
  enum class TaskSize { Fixed, Exponential };
  TaskSize task_size = TaskSize::Fixed;
  double cycles_per_bit = 1000.0;
  PathlossModel macro_pathloss = PathlossModel::macro();
  PathlossModel small_pathloss = PathlossModel::small_cell();

  // Decision-variable ladder: the config fixes omega and C_small; the macro
  // compute rate follows from the tier power ratio.
  double power_ratio_linear() const;
  double c_macro_cycles_per_s() const;

  void validate() const;
};

// Inter-tier cross-domain resource disparity for a realized deployment.
double disparity_omega(double p_macro_dbm, double p_small_dbm, double c_macro,
                       double c_small);

// Achievable noise-limited uplink rate from a UE position to a node.
double uplink_rate_bps(const Config& cfg, const UePoint& ue, const NodeSite& node);

// Predicted one-way latency: UL transfer plus queued-and-own execution.
double predict_e_pdb(const OffloadTask& task, double ul_rate_bps, const NodeSite& server);

// predict + admit: the chosen server's queue grows by the task's cycles.
double e_pdb_admit(const OffloadTask& task, double ul_rate_bps, NodeSite& server);

// Conventional coupled rule: DL and UL at the max-DL-RSRP node
// (ties: nearer node, then lower id).
AssociationDecision coupled_association(const Config& cfg, const UePoint& ue,
                                        std::span<const NodeSite> nodes);

// Proposed rule: DL unchanged, UL at the argmin of the predicted E-PDB
// (ties: smaller pathloss, then lower id).
AssociationDecision decoupled_mec_association(const Config& cfg, const UePoint& ue,
                                              const OffloadTask& task,
                                              std::span<const NodeSite> nodes);

struct RuleResult {
  std::string rule;
  EmpiricalDistribution e_pdb_s;
};

struct ExperimentResult {
  double omega = 0.0;
  RuleResult coupled;
  RuleResult decoupled;
};

ExperimentResult run_experiment(const Config& cfg, std::uint64_t master_seed);

}  // namespace mcasim::mecassoc
