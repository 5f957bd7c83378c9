// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include "mcasim/ccselect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mcasim/engine.hpp"
#include "mcasim/errors.hpp"

namespace mcasim::ccselect {

namespace {
constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0, y = 0.0;
};

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Standard tri-sector horizontal pattern: -min(12*(theta/theta3db)^2, Am).
double sector_pattern_db(double bearing_deg, double azimuth_deg, double theta3db_deg,
                         double backoff_db) {
  double theta = std::fmod(bearing_deg - azimuth_deg, 360.0);
  if (theta > 180.0) theta -= 360.0;
  if (theta < -180.0) theta += 360.0;
  const double loss = 12.0 * (theta / theta3db_deg) * (theta / theta3db_deg);
  return -std::min(loss, backoff_db);
}

}  // namespace

double Rule::evaluate(double metric_value) const {
  if (metric_value <= low_anchor) return score_at_low;
  if (metric_value >= high_anchor) return score_at_high;
  const double t = (metric_value - low_anchor) / (high_anchor - low_anchor);
  return score_at_low + t * (score_at_high - score_at_low);
}

void Rule::validate(const std::string& where) const {
  if (!(low_anchor < high_anchor))
    throw ConfigError(where + ": low_anchor must be < high_anchor");
  for (double s : {score_at_low, score_at_high}) {
    if (!(s >= 0.0 && s <= 1.0))
      throw ConfigError(where + ": anchor scores must be in [0, 1]");
  }
}

double evaluate_rule(const Rule& rule, const UeMeasurement& m) {
  std::optional<double> value;
  switch (rule.metric) {
    case Metric::Rsrp: value = m.rsrp_dbm; break;
    case Metric::Rsrq: value = m.rsrq_db; break;
    case Metric::Load: value = m.load_fraction; break;
  }
  if (!value) throw std::invalid_argument("evaluate_rule: metric missing from measurement");
  return rule.evaluate(*value);
}

double aggregate_scores(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("aggregate_scores: no scores");
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

void Policy::validate(const std::string& where) const {
  if (rules.empty()) throw ConfigError(where + ": at least one rule required");
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw ConfigError(where + ".threshold: must be in [0, 1]");
  if (max_ccs < 1) throw ConfigError(where + ".max_ccs: must be >= 1");
  for (const auto& r : rules) r.validate(where + ".rule");
}

Policy Policy::rsrp_baseline() {
  return Policy{"baseline_rsrp", {Rule{Metric::Rsrp, -120.0, -60.0, 0.0, 1.0}}, 0.5, 5};
}

Policy Policy::rsrq_load_proposed() {
  return Policy{"proposed_rsrq_load",
                {Rule{Metric::Rsrq, -19.5, -3.0, 0.0, 1.0},
                 Rule{Metric::Load, 0.0, 1.0, 1.0, 0.0}},
                0.5,
                5};
}

Assignment select_ccs(std::span<const CcCandidate> candidates, const Policy& policy) {
  struct Scored {
    double score;
    const CcCandidate* cc;
  };
  std::vector<Scored> scored;
  scored.reserve(candidates.size());
  std::vector<double> rule_scores(policy.rules.size());
  for (const auto& cand : candidates) {
    if (cand.load >= cand.capacity) continue;  // no headroom
    for (std::size_t r = 0; r < policy.rules.size(); ++r)
      rule_scores[r] = evaluate_rule(policy.rules[r], cand.measurement);
    scored.push_back(Scored{aggregate_scores(rule_scores), &cand});
  }
  Assignment out;
  if (scored.empty()) return out;  // blocked

  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.cc->load != b.cc->load) return a.cc->load < b.cc->load;
    if (a.cc->cc != b.cc->cc) return a.cc->cc < b.cc->cc;
    if (a.cc->sector != b.cc->sector) return a.cc->sector < b.cc->sector;
    return a.cc->site < b.cc->site;
  });

  std::size_t take = 0;
  while (take < scored.size() && take < static_cast<std::size_t>(policy.max_ccs) &&
         scored[take].score >= policy.threshold)
    ++take;
  if (take == 0) take = 1;  // service guarantee: best CC even below threshold

  out.cells.reserve(take);
  bool ps_cell_named = false;
  for (std::size_t i = 0; i < take; ++i) {
    CellRole role = CellRole::SCell;
    if (i == 0) {
      role = CellRole::PCell;
    } else if (!ps_cell_named && scored[i].cc->site != out.cells[0].site) {
      role = CellRole::PSCell;
      ps_cell_named = true;
    }
    out.cells.push_back(Assignment::Entry{scored[i].cc->cell_index, scored[i].cc->site,
                                          scored[i].score, role});
  }
  return out;
}

void Config::validate() const {
  if (site_count < 1) throw ConfigError("ccselect.site_count: must be >= 1");
  if (!(isd_m > 0)) throw ConfigError("ccselect.isd_m: must be > 0");
  if (sectors_per_site < 1) throw ConfigError("ccselect.sectors_per_site: must be >= 1");
  if (ccs_per_sector < 1) throw ConfigError("ccselect.ccs_per_sector: must be >= 1");
  if (!(cc_bandwidth_hz > 0)) throw ConfigError("ccselect.cc_bandwidth_hz: must be > 0");
  if (capacity_per_cc < 1) throw ConfigError("ccselect.capacity_per_cc: must be >= 1");
  if (ue_count < 1) throw ConfigError("ccselect.ue_count: must be >= 1");
  if (!(hotspot_fraction >= 0.0 && hotspot_fraction <= 1.0))
    throw ConfigError("ccselect.hotspot_fraction: must be in [0, 1]");
  if (!(hotspot_radius_m > 0)) throw ConfigError("ccselect.hotspot_radius_m: must be > 0");
  if (!(report_margin_db > 0)) throw ConfigError("ccselect.report_margin_db: must be > 0");
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw ConfigError("ccselect.threshold: must be in [0, 1]");
  if (max_ccs < 1 || max_ccs > ccs_per_sector * sectors_per_site * site_count)
    throw ConfigError("ccselect.max_ccs: out of range");
  if (!(antenna_theta3db_deg > 0))
    throw ConfigError("ccselect.antenna_theta3db_deg: must be > 0");
  rsrp_rule.validate("ccselect.rsrp_rule");
  rsrq_rule.validate("ccselect.rsrq_rule");
  load_rule.validate("ccselect.load_rule");
}

Policy Config::baseline_policy() const {
  Policy p{"baseline_rsrp", {rsrp_rule}, threshold, max_ccs};
  p.validate("ccselect.baseline");
  return p;
}

Policy Config::proposed_policy() const {
  Policy p{"proposed_rsrq_load", {rsrq_rule, load_rule}, threshold, max_ccs};
  p.validate("ccselect.proposed");
  return p;
}

double PolicyResult::blocked_fraction() const {
  return ues > 0 ? static_cast<double>(blocked) / static_cast<double>(ues) : 0.0;
}

double jain_fairness(std::span<const int> loads) {
  if (loads.empty()) return 1.0;
  double sum = 0.0, sumsq = 0.0;
  for (int l : loads) {
    sum += l;
    sumsq += static_cast<double>(l) * static_cast<double>(l);
  }
  if (sumsq == 0.0) return 1.0;
  return sum * sum / (static_cast<double>(loads.size()) * sumsq);
}

namespace {

// Hexagonal layout: center site plus rings, truncated at site_count.
std::vector<Vec2> hex_layout(int site_count, double isd) {
  std::vector<Vec2> sites;
  sites.push_back({0.0, 0.0});
  for (int ring = 1; static_cast<int>(sites.size()) < site_count; ++ring) {
    // Walk the ring: start at (ring * isd, 0) and take ring steps along each
    // of the six hex directions.
    double x = ring * isd, y = 0.0;
    for (int dir = 0; dir < 6 && static_cast<int>(sites.size()) < site_count; ++dir) {
      const double ang = (120.0 + 60.0 * dir) * kPi / 180.0;
      for (int step = 0; step < ring && static_cast<int>(sites.size()) < site_count;
           ++step) {
        sites.push_back({x, y});
        x += isd * std::cos(ang);
        y += isd * std::sin(ang);
      }
    }
  }
  return sites;
}

struct Scenario {
  std::vector<Vec2> sites;
  std::vector<double> sector_azimuth_deg;  // per global sector
  int sectors = 0;
  // rx power in dBm from each global sector, per UE
  std::vector<std::vector<double>> rx_dbm;
  std::vector<Vec2> ues;
};

int global_sector(const Config& cfg, int site, int sector) {
  return site * cfg.sectors_per_site + sector;
}

Scenario build_scenario(const Config& cfg, std::uint64_t master_seed) {
  Scenario sc;
  sc.sites = hex_layout(cfg.site_count, cfg.isd_m);
  sc.sectors = cfg.site_count * cfg.sectors_per_site;
  sc.sector_azimuth_deg.resize(static_cast<std::size_t>(sc.sectors));
  for (int s = 0; s < cfg.site_count; ++s)
    for (int k = 0; k < cfg.sectors_per_site; ++k)
      sc.sector_azimuth_deg[static_cast<std::size_t>(global_sector(cfg, s, k))] =
          360.0 * k / cfg.sectors_per_site;

  // UE drop: hotspot disc over the boundary of site 0's first two sectors,
  // remainder uniform over the layout disc.
  Vec2 centroid{0.0, 0.0};
  double extent = 0.0;
  for (const auto& p : sc.sites) {
    centroid.x += p.x / static_cast<double>(sc.sites.size());
    centroid.y += p.y / static_cast<double>(sc.sites.size());
  }
  for (const auto& p : sc.sites) extent = std::max(extent, distance(p, centroid));
  const double layout_radius = extent + 0.6 * cfg.isd_m;

  const Vec2 hotspot_center{
      sc.sites[0].x + cfg.hotspot_range_m * std::cos(cfg.hotspot_bearing_deg * kPi / 180.0),
      sc.sites[0].y + cfg.hotspot_range_m * std::sin(cfg.hotspot_bearing_deg * kPi / 180.0)};

  RngStream drop(master_seed, "ccselect:drop");
  const int hotspot_ues =
      static_cast<int>(std::llround(cfg.hotspot_fraction * cfg.ue_count));
  sc.ues.reserve(static_cast<std::size_t>(cfg.ue_count));
  for (int u = 0; u < cfg.ue_count; ++u) {
    RngStream r = drop.fork(static_cast<std::uint64_t>(u));
    const bool hot = u < hotspot_ues;
    const double radius = hot ? cfg.hotspot_radius_m : layout_radius;
    const Vec2 center = hot ? hotspot_center : centroid;
    const double rr = radius * std::sqrt(r.next_double());
    const double th = 2.0 * kPi * r.next_double();
    sc.ues.push_back({center.x + rr * std::cos(th), center.y + rr * std::sin(th)});
  }

  sc.rx_dbm.assign(sc.ues.size(), std::vector<double>(static_cast<std::size_t>(sc.sectors)));
  for (std::size_t u = 0; u < sc.ues.size(); ++u) {
    for (int s = 0; s < cfg.site_count; ++s) {
      const double d = std::max(1.0, distance(sc.ues[u], sc.sites[static_cast<std::size_t>(s)]));
      const double pl = cfg.pathloss(d);
      const double bearing =
          std::atan2(sc.ues[u].y - sc.sites[static_cast<std::size_t>(s)].y,
                     sc.ues[u].x - sc.sites[static_cast<std::size_t>(s)].x) *
          180.0 / kPi;
      for (int k = 0; k < cfg.sectors_per_site; ++k) {
        const int g = global_sector(cfg, s, k);
        const double pattern = sector_pattern_db(bearing, sc.sector_azimuth_deg[static_cast<std::size_t>(g)],
                                                 cfg.antenna_theta3db_deg, cfg.antenna_backoff_db);
        sc.rx_dbm[u][static_cast<std::size_t>(g)] =
            rsrp_dbm(cfg.cc_tx_power_dbm + cfg.antenna_gain_dbi + pattern, pl);
      }
    }
  }
  return sc;
}

PolicyResult run_policy(const Config& cfg, const Scenario& sc, const Policy& policy,
                        std::span<const int> order, int hotspot_ues) {
  const int sectors = sc.sectors;
  const int cells = sectors * cfg.ccs_per_sector;
  std::vector<int> load(static_cast<std::size_t>(cells), 0);
  std::vector<Assignment> assignments(sc.ues.size());
  const double noise_mw =
      db_to_linear(noise_power_dbm(cfg.cc_bandwidth_hz, cfg.noise_figure_db));

  PolicyResult res;
  res.policy = policy.name;
  res.ues = static_cast<std::int64_t>(sc.ues.size());
  res.throughput_by_ccs.resize(static_cast<std::size_t>(policy.max_ccs));

  std::vector<CcCandidate> cands;
  cands.reserve(static_cast<std::size_t>(cells));
  for (int ue : order) {
    const auto& rx = sc.rx_dbm[static_cast<std::size_t>(ue)];
    // Total per-sector received power in mW, for the RSRQ denominator.
    std::vector<double> rx_mw(static_cast<std::size_t>(sectors));
    for (int g = 0; g < sectors; ++g)
      rx_mw[static_cast<std::size_t>(g)] = db_to_linear(rx[static_cast<std::size_t>(g)]);

    cands.clear();
    double best_rx = -1e300;
    for (int g = 0; g < sectors; ++g)
      best_rx = std::max(best_rx, rx[static_cast<std::size_t>(g)]);
    const double report_floor = std::max(cfg.min_rsrp_dbm, best_rx - cfg.report_margin_db);
    int idx = 0;
    for (int g = 0; g < sectors; ++g) {
      if (rx[static_cast<std::size_t>(g)] < report_floor) {
        idx += cfg.ccs_per_sector;  // outside the reporting range
        continue;
      }
      for (int c = 0; c < cfg.ccs_per_sector; ++c, ++idx) {
        cands.emplace_back();
        CcCandidate& cand = cands.back();
        cand.cell_index = idx;
        cand.site = g / cfg.sectors_per_site;
        cand.sector = g % cfg.sectors_per_site;
        cand.cc = c;
        cand.load = load[static_cast<std::size_t>(idx)];
        cand.capacity = cfg.capacity_per_cc;
        const double own = rx_mw[static_cast<std::size_t>(g)];
        // Total received power on the CC: the measured cell's reference
        // signals at full power, other cells scaled by their activity
        // (load/capacity), plus the noise floor.
        double total = own + noise_mw;
        for (int o = 0; o < sectors; ++o) {
          if (o == g) continue;
          const int other_idx = o * cfg.ccs_per_sector + c;
          const double activity =
              static_cast<double>(load[static_cast<std::size_t>(other_idx)]) /
              static_cast<double>(cfg.capacity_per_cc);
          total += rx_mw[static_cast<std::size_t>(o)] * activity;
        }
        cand.measurement.rsrp_dbm = rx[static_cast<std::size_t>(g)];
        cand.measurement.rsrq_db = rsrq_db(own, total);
        cand.measurement.load_fraction =
            static_cast<double>(cand.load) / static_cast<double>(cand.capacity);
      }
    }
    Assignment a = select_ccs(cands, policy);
    if (a.blocked()) {
      ++res.blocked;
    } else {
      for (const auto& e : a.cells) ++load[static_cast<std::size_t>(e.cell_index)];
    }
    assignments[static_cast<std::size_t>(ue)] = std::move(a);
  }

  // Achieved throughput with final loads: equal time share on each CC,
  // full-buffer co-channel interference from every other sector.
  for (std::size_t u = 0; u < sc.ues.size(); ++u) {
    const Assignment& a = assignments[u];
    UeOutcome out;
    out.ue = static_cast<int>(u);
    out.hotspot = static_cast<int>(u) < hotspot_ues;
    out.blocked = a.blocked();
    if (!a.blocked()) {
      const auto& rx = sc.rx_dbm[u];
      double tput = 0.0;
      for (const auto& e : a.cells) {
        const int g = e.cell_index / cfg.ccs_per_sector;
        const int c = e.cell_index % cfg.ccs_per_sector;
        // Co-channel interference weighted by the interfering cell's final
        // activity (load/capacity), consistent with the RSRQ measurement.
        double interference = 0.0;
        for (int o = 0; o < sectors; ++o) {
          if (o == g) continue;
          const int other_idx = o * cfg.ccs_per_sector + c;
          const double activity =
              static_cast<double>(load[static_cast<std::size_t>(other_idx)]) /
              static_cast<double>(cfg.capacity_per_cc);
          interference += db_to_linear(rx[static_cast<std::size_t>(o)]) * activity;
        }
        const double sinr = db_to_linear(rx[static_cast<std::size_t>(g)]) /
                            (noise_mw + interference);
        const int users = load[static_cast<std::size_t>(e.cell_index)];
        tput += shannon_rate(sinr, cfg.cc_bandwidth_hz) / std::max(1, users);
        out.cells.push_back(e.cell_index);
      }
      out.throughput_bps = tput;
      res.throughput_all.add(tput);
      const std::size_t bucket =
          std::min(a.cells.size(), res.throughput_by_ccs.size()) - 1;
      res.throughput_by_ccs[bucket].add(tput);
    }
    if (cfg.keep_details) res.outcomes.push_back(std::move(out));
  }
  res.final_loads = std::move(load);
  res.jain_index = jain_fairness(res.final_loads);
  return res;
}

}  // namespace

ExperimentResult run_experiment(const Config& cfg, std::uint64_t master_seed) {
  cfg.validate();
  Scenario sc = build_scenario(cfg, master_seed);

  // Arrival order: one seeded permutation shared by both policies.
  std::vector<int> order(sc.ues.size());
  std::iota(order.begin(), order.end(), 0);
  RngStream shuffle(master_seed, "ccselect:order");
  for (std::size_t i = order.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(shuffle.uniform_int(i));
    std::swap(order[i - 1], order[j]);
  }

  const int hotspot_ues =
      static_cast<int>(std::llround(cfg.hotspot_fraction * cfg.ue_count));
  ExperimentResult res;
  res.baseline = run_policy(cfg, sc, cfg.baseline_policy(), order, hotspot_ues);
  res.proposed = run_policy(cfg, sc, cfg.proposed_policy(), order, hotspot_ues);
  return res;
}

}  // namespace mcasim::ccselect
