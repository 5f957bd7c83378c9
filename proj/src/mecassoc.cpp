// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include "mcasim/mecassoc.hpp"

#include <cmath>
#include <stdexcept>

#include "mcasim/errors.hpp"
#include "mcasim/rng.hpp"

namespace mcasim::mecassoc {

namespace {
constexpr double kPi = 3.14159265358979323846;

double node_distance(const UePoint& ue, const NodeSite& n) {
  return std::max(1.0, std::hypot(ue.x - n.x, ue.y - n.y));
}

double node_pathloss_db(const Config& cfg, const UePoint& ue, const NodeSite& n) {
  const double d = node_distance(ue, n);
  return n.tier == Tier::Macro ? cfg.macro_pathloss(d) : cfg.small_pathloss(d);
}
}  // namespace

double Config::power_ratio_linear() const {
  return db_to_linear(macro_tx_dbm - small_tx_dbm);
}

double Config::c_macro_cycles_per_s() const {
  return c_small_cycles_per_s * power_ratio_linear() / omega;
}

void Config::validate() const {
  if (!(region_radius_m > 0)) throw ConfigError("mecassoc.region_radius_m: must be > 0");
  if (small_count < 1) throw ConfigError("mecassoc.small_count: must be >= 1");
  if (ue_count < 1) throw ConfigError("mecassoc.ue_count: must be >= 1");
  if (macro_tx_dbm < small_tx_dbm)
    throw ConfigError("mecassoc: macro_tx_dbm must be >= small_tx_dbm");
  if (!(ul_bandwidth_hz > 0)) throw ConfigError("mecassoc.ul_bandwidth_hz: must be > 0");
  if (!(c_small_cycles_per_s > 0))
    throw ConfigError("mecassoc.c_small_cycles_per_s: must be > 0");
  if (!(omega > 0)) throw ConfigError("mecassoc.omega: must be > 0");
  if (!(task_bits > 0)) throw ConfigError("mecassoc.task_bits: must be > 0");
  if (!(cycles_per_bit > 0)) throw ConfigError("mecassoc.cycles_per_bit: must be > 0");
}

double disparity_omega(double p_macro_dbm, double p_small_dbm, double c_macro,
                       double c_small) {
  if (!(c_macro > 0 && c_small > 0))
    throw std::invalid_argument("disparity_omega: compute rates must be > 0");
  return db_to_linear(p_macro_dbm - p_small_dbm) / (c_macro / c_small);
}

double uplink_rate_bps(const Config& cfg, const UePoint& ue, const NodeSite& node) {
  const double pl = node_pathloss_db(cfg, ue, node);
  const double snr_db =
      cfg.ue_tx_dbm - pl - noise_power_dbm(cfg.ul_bandwidth_hz, cfg.noise_figure_db);
  return shannon_rate(db_to_linear(snr_db), cfg.ul_bandwidth_hz);
}

double predict_e_pdb(const OffloadTask& task, double ul_rate_bps, const NodeSite& server) {
  if (!(ul_rate_bps > 0)) throw std::invalid_argument("e_pdb: uplink rate must be > 0");
  return task.input_bits / ul_rate_bps +
         (server.queued_cycles + task.cycles()) / server.cpu_cycles_per_s;
}

double e_pdb_admit(const OffloadTask& task, double ul_rate_bps, NodeSite& server) {
  const double v = predict_e_pdb(task, ul_rate_bps, server);
  server.queued_cycles += task.cycles();
  return v;
}

AssociationDecision coupled_association(const Config& cfg, const UePoint& ue,
                                        std::span<const NodeSite> nodes) {
  if (nodes.empty()) throw std::invalid_argument("coupled_association: no nodes");
  int best = 0;
  double best_rsrp = -1e300, best_dist = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double rsrp = rsrp_dbm(nodes[i].tx_power_dbm, node_pathloss_db(cfg, ue, nodes[i]));
    const double dist = node_distance(ue, nodes[i]);
    bool better = rsrp > best_rsrp;
    if (rsrp == best_rsrp) {
      better = dist < best_dist ||
               (dist == best_dist && nodes[i].id < nodes[static_cast<std::size_t>(best)].id);
    }
    if (i == 0 || better) {
      best = static_cast<int>(i);
      best_rsrp = rsrp;
      best_dist = dist;
    }
  }
  const int id = nodes[static_cast<std::size_t>(best)].id;
  return AssociationDecision{id, id};
}

AssociationDecision decoupled_mec_association(const Config& cfg, const UePoint& ue,
                                              const OffloadTask& task,
                                              std::span<const NodeSite> nodes) {
  AssociationDecision dec = coupled_association(cfg, ue, nodes);
  int best = 0;
  double best_epdb = 0.0, best_pl = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double epdb = predict_e_pdb(task, uplink_rate_bps(cfg, ue, nodes[i]), nodes[i]);
    const double pl = node_pathloss_db(cfg, ue, nodes[i]);
    bool better = epdb < best_epdb;
    if (epdb == best_epdb) {
      better = pl < best_pl ||
               (pl == best_pl && nodes[i].id < nodes[static_cast<std::size_t>(best)].id);
    }
    if (i == 0 || better) {
      best = static_cast<int>(i);
      best_epdb = epdb;
      best_pl = pl;
    }
  }
  dec.ul_node = nodes[static_cast<std::size_t>(best)].id;
  return dec;
}

ExperimentResult run_experiment(const Config& cfg, std::uint64_t master_seed) {
  cfg.validate();

  std::vector<NodeSite> layout;
  layout.reserve(static_cast<std::size_t>(cfg.small_count) + 1);
  layout.push_back(NodeSite{0, Tier::Macro, 0.0, 0.0, cfg.macro_tx_dbm,
                            cfg.c_macro_cycles_per_s(), 0.0});
  RngStream place(master_seed, "mecassoc:nodes");
  for (int i = 0; i < cfg.small_count; ++i) {
    RngStream r = place.fork(static_cast<std::uint64_t>(i));
    const double rr = cfg.region_radius_m * std::sqrt(r.next_double());
    const double th = 2.0 * kPi * r.next_double();
    layout.push_back(NodeSite{i + 1, Tier::Small, rr * std::cos(th), rr * std::sin(th),
                              cfg.small_tx_dbm, cfg.c_small_cycles_per_s, 0.0});
  }

  RngStream drop(master_seed, "mecassoc:ues");
  RngStream tasks(master_seed, "mecassoc:tasks");
  std::vector<UePoint> ues(static_cast<std::size_t>(cfg.ue_count));
  std::vector<OffloadTask> work(static_cast<std::size_t>(cfg.ue_count));
  for (int u = 0; u < cfg.ue_count; ++u) {
    RngStream r = drop.fork(static_cast<std::uint64_t>(u));
    const double rr = cfg.region_radius_m * std::sqrt(r.next_double());
    const double th = 2.0 * kPi * r.next_double();
    ues[static_cast<std::size_t>(u)] = UePoint{rr * std::cos(th), rr * std::sin(th)};
    double bits = cfg.task_bits;
    if (cfg.task_size == Config::TaskSize::Exponential)
      bits = tasks.fork(static_cast<std::uint64_t>(u)).exponential(cfg.task_bits);
    work[static_cast<std::size_t>(u)] = OffloadTask{bits, cfg.cycles_per_bit};
  }

  ExperimentResult res;
  res.omega = disparity_omega(cfg.macro_tx_dbm, cfg.small_tx_dbm,
                              cfg.c_macro_cycles_per_s(), cfg.c_small_cycles_per_s);
  res.coupled.rule = "coupled_max_rsrp";
  res.decoupled.rule = "decoupled_mec_aware";

  // Sequential one-shot admission per rule; the realized E-PDB is the
  // predictor at admission time.
  std::vector<NodeSite> coupled_nodes = layout;
  std::vector<NodeSite> decoupled_nodes = layout;
  for (int u = 0; u < cfg.ue_count; ++u) {
    const UePoint& ue = ues[static_cast<std::size_t>(u)];
    const OffloadTask& task = work[static_cast<std::size_t>(u)];

    const AssociationDecision cd = coupled_association(cfg, ue, coupled_nodes);
    NodeSite& cnode = coupled_nodes[static_cast<std::size_t>(cd.ul_node)];
    res.coupled.e_pdb_s.add(e_pdb_admit(task, uplink_rate_bps(cfg, ue, cnode), cnode));

    const AssociationDecision dd = decoupled_mec_association(cfg, ue, task, decoupled_nodes);
    NodeSite& dnode = decoupled_nodes[static_cast<std::size_t>(dd.ul_node)];
    res.decoupled.e_pdb_s.add(e_pdb_admit(task, uplink_rate_bps(cfg, ue, dnode), dnode));
  }
  return res;
}

}  // namespace mcasim::mecassoc
