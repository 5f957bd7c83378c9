// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include "mcasim/config.hpp"

#include <fstream>
#include <set>

#include "mcasim/errors.hpp"

namespace mcasim {

namespace {

using nlohmann::json;

// Tracks consumed keys so leftovers can be rejected, and records which
// fields fell back to their defaults.
class Strict {
 public:
  Strict(const json& j, std::string path, std::vector<std::string>* defaulted)
      : j_(j), path_(std::move(path)), defaulted_(defaulted) {
    if (!j_.is_object())
      throw ConfigError(path_ + ": expected a JSON object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  template <typename T>
  T get(const char* key, T def) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      if (defaulted_) defaulted_->push_back(field(key));
      return def;
    }
    try {
      return j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(field(key) + ": wrong type");
    }
  }

  std::string get_enum(const char* key, const std::string& def,
                       const std::set<std::string>& allowed) {
    const std::string v = get<std::string>(key, def);
    if (!allowed.count(v)) throw ConfigError(field(key) + ": unknown value '" + v + "'");
    return v;
  }

  json child(const char* key) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      if (defaulted_) defaulted_->push_back(field(key));
      return json::object();
    }
    return j_.at(key);
  }

  void done() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key()))
        throw ConfigError(field(it.key().c_str()) + ": unknown key");
    }
  }

  std::string field(const char* key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string>* defaulted_;
  std::set<std::string> seen_;
};

Fading parse_fading(const std::string& s) {
  return s == "none" ? Fading::None : Fading::Rayleigh;
}
const char* fading_name(Fading f) { return f == Fading::None ? "none" : "rayleigh"; }

LinkModel parse_link(const json& j, const std::string& path, const LinkModel& def,
                     std::vector<std::string>* defaulted) {
  Strict s(j, path, defaulted);
  LinkModel link = def;
  link.mean_snr_db = s.get<double>("mean_snr_db", def.mean_snr_db);
  link.target_snr_db = s.get<double>("target_snr_db", def.target_snr_db);
  link.fading = parse_fading(s.get_enum("fading", fading_name(def.fading),
                                        {"rayleigh", "none"}));
  s.done();
  return link;
}

json link_json(const LinkModel& l) {
  return json{{"mean_snr_db", l.mean_snr_db},
              {"target_snr_db", l.target_snr_db},
              {"fading", fading_name(l.fading)}};
}

PathlossModel parse_pathloss(const json& j, const std::string& path,
                             const PathlossModel& def,
                             std::vector<std::string>* defaulted) {
  Strict s(j, path, defaulted);
  PathlossModel pl = def;
  pl.intercept_db = s.get<double>("intercept_db", def.intercept_db);
  pl.slope_db_per_decade = s.get<double>("slope_db_per_decade", def.slope_db_per_decade);
  pl.min_coupling_loss_db = s.get<double>("min_coupling_loss_db", def.min_coupling_loss_db);
  s.done();
  return pl;
}

json pathloss_json(const PathlossModel& pl) {
  return json{{"intercept_db", pl.intercept_db},
              {"slope_db_per_decade", pl.slope_db_per_decade},
              {"min_coupling_loss_db", pl.min_coupling_loss_db}};
}

ccselect::Rule parse_rule(const json& j, const std::string& path,
                          const ccselect::Rule& def,
                          std::vector<std::string>* defaulted) {
  Strict s(j, path, defaulted);
  ccselect::Rule r = def;
  r.low_anchor = s.get<double>("low_anchor", def.low_anchor);
  r.high_anchor = s.get<double>("high_anchor", def.high_anchor);
  r.score_at_low = s.get<double>("score_at_low", def.score_at_low);
  r.score_at_high = s.get<double>("score_at_high", def.score_at_high);
  s.done();
  return r;
}

json rule_json(const ccselect::Rule& r) {
  return json{{"low_anchor", r.low_anchor},
              {"high_anchor", r.high_anchor},
              {"score_at_low", r.score_at_low},
              {"score_at_high", r.score_at_high}};
}

void parse_dupstat(const json& j, dupstat::Config& c, std::vector<std::string>* defaulted) {
  Strict s(j, "dupstat", defaulted);
  c.link = parse_link(s.child("link"), "dupstat.link", c.link, defaulted);
  c.duplication_set_size = s.get<int>("duplication_set_size", c.duplication_set_size);
  c.harq_rtt_slots = s.get<int>("harq_rtt_slots", c.harq_rtt_slots);
  c.report_delay_slots = s.get<int>("report_delay_slots", c.report_delay_slots);
  c.packet_count = s.get<std::int64_t>("packet_count", c.packet_count);
  c.outage_target = s.get<double>("outage_target", c.outage_target);
  const std::string arrivals =
      s.get_enum("arrivals",
                 c.arrivals == dupstat::Config::Arrivals::Isolated ? "isolated" : "poisson",
                 {"isolated", "poisson"});
  c.arrivals = arrivals == "isolated" ? dupstat::Config::Arrivals::Isolated
                                      : dupstat::Config::Arrivals::Poisson;
  c.isolated_stride_slots = s.get<int>("isolated_stride_slots", c.isolated_stride_slots);
  c.poisson_rate_per_slot = s.get<double>("poisson_rate_per_slot", c.poisson_rate_per_slot);
  s.done();
}

json dupstat_json(const dupstat::Config& c) {
  return json{
      {"link", link_json(c.link)},
      {"duplication_set_size", c.duplication_set_size},
      {"harq_rtt_slots", c.harq_rtt_slots},
      {"report_delay_slots", c.report_delay_slots},
      {"packet_count", c.packet_count},
      {"outage_target", c.outage_target},
      {"arrivals", c.arrivals == dupstat::Config::Arrivals::Isolated ? "isolated" : "poisson"},
      {"isolated_stride_slots", c.isolated_stride_slots},
      {"poisson_rate_per_slot", c.poisson_rate_per_slot},
  };
}

void parse_ccselect(const json& j, ccselect::Config& c, std::vector<std::string>* defaulted) {
  Strict s(j, "ccselect", defaulted);
  c.site_count = s.get<int>("site_count", c.site_count);
  c.isd_m = s.get<double>("isd_m", c.isd_m);
  c.sectors_per_site = s.get<int>("sectors_per_site", c.sectors_per_site);
  c.ccs_per_sector = s.get<int>("ccs_per_sector", c.ccs_per_sector);
  c.cc_bandwidth_hz = s.get<double>("cc_bandwidth_hz", c.cc_bandwidth_hz);
  c.cc_tx_power_dbm = s.get<double>("cc_tx_power_dbm", c.cc_tx_power_dbm);
  c.antenna_gain_dbi = s.get<double>("antenna_gain_dbi", c.antenna_gain_dbi);
  c.antenna_theta3db_deg = s.get<double>("antenna_theta3db_deg", c.antenna_theta3db_deg);
  c.antenna_backoff_db = s.get<double>("antenna_backoff_db", c.antenna_backoff_db);
  c.capacity_per_cc = s.get<int>("capacity_per_cc", c.capacity_per_cc);
  c.noise_figure_db = s.get<double>("noise_figure_db", c.noise_figure_db);
  c.pathloss = parse_pathloss(s.child("pathloss"), "ccselect.pathloss", c.pathloss, defaulted);
  c.ue_count = s.get<int>("ue_count", c.ue_count);
  c.hotspot_fraction = s.get<double>("hotspot_fraction", c.hotspot_fraction);
  c.hotspot_radius_m = s.get<double>("hotspot_radius_m", c.hotspot_radius_m);
  c.hotspot_range_m = s.get<double>("hotspot_range_m", c.hotspot_range_m);
  c.hotspot_bearing_deg = s.get<double>("hotspot_bearing_deg", c.hotspot_bearing_deg);
  c.min_rsrp_dbm = s.get<double>("min_rsrp_dbm", c.min_rsrp_dbm);
  c.report_margin_db = s.get<double>("report_margin_db", c.report_margin_db);
  c.threshold = s.get<double>("threshold", c.threshold);
  c.max_ccs = s.get<int>("max_ccs", c.max_ccs);
  c.rsrp_rule = parse_rule(s.child("rsrp_rule"), "ccselect.rsrp_rule", c.rsrp_rule, defaulted);
  c.rsrq_rule = parse_rule(s.child("rsrq_rule"), "ccselect.rsrq_rule", c.rsrq_rule, defaulted);
  c.load_rule = parse_rule(s.child("load_rule"), "ccselect.load_rule", c.load_rule, defaulted);
  s.done();
}

json ccselect_json(const ccselect::Config& c) {
  return json{
      {"site_count", c.site_count},
      {"isd_m", c.isd_m},
      {"sectors_per_site", c.sectors_per_site},
      {"ccs_per_sector", c.ccs_per_sector},
      {"cc_bandwidth_hz", c.cc_bandwidth_hz},
      {"cc_tx_power_dbm", c.cc_tx_power_dbm},
      {"antenna_gain_dbi", c.antenna_gain_dbi},
      {"antenna_theta3db_deg", c.antenna_theta3db_deg},
      {"antenna_backoff_db", c.antenna_backoff_db},
      {"capacity_per_cc", c.capacity_per_cc},
      {"noise_figure_db", c.noise_figure_db},
      {"pathloss", pathloss_json(c.pathloss)},
      {"ue_count", c.ue_count},
      {"hotspot_fraction", c.hotspot_fraction},
      {"hotspot_radius_m", c.hotspot_radius_m},
      {"hotspot_range_m", c.hotspot_range_m},
      {"hotspot_bearing_deg", c.hotspot_bearing_deg},
      {"min_rsrp_dbm", c.min_rsrp_dbm},
      {"report_margin_db", c.report_margin_db},
      {"threshold", c.threshold},
      {"max_ccs", c.max_ccs},
      {"rsrp_rule", rule_json(c.rsrp_rule)},
      {"rsrq_rule", rule_json(c.rsrq_rule)},
      {"load_rule", rule_json(c.load_rule)},
  };
}

void parse_mecassoc(const json& j, mecassoc::Config& c, std::vector<std::string>* defaulted) {
  Strict s(j, "mecassoc", defaulted);
  c.region_radius_m = s.get<double>("region_radius_m", c.region_radius_m);
  c.small_count = s.get<int>("small_count", c.small_count);
  c.ue_count = s.get<int>("ue_count", c.ue_count);
  c.macro_tx_dbm = s.get<double>("macro_tx_dbm", c.macro_tx_dbm);
  c.small_tx_dbm = s.get<double>("small_tx_dbm", c.small_tx_dbm);
  c.ue_tx_dbm = s.get<double>("ue_tx_dbm", c.ue_tx_dbm);
  c.ul_bandwidth_hz = s.get<double>("ul_bandwidth_hz", c.ul_bandwidth_hz);
  c.noise_figure_db = s.get<double>("noise_figure_db", c.noise_figure_db);
  c.c_small_cycles_per_s = s.get<double>("c_small_cycles_per_s", c.c_small_cycles_per_s);
  c.omega = s.get<double>("omega", c.omega);
  c.task_bits = s.get<double>("task_bits", c.task_bits);
  const std::string ts = s.get_enum(
      "task_size", c.task_size == mecassoc::Config::TaskSize::Fixed ? "fixed" : "exponential",
      {"fixed", "exponential"});
  c.task_size = ts == "fixed" ? mecassoc::Config::TaskSize::Fixed
                              : mecassoc::Config::TaskSize::Exponential;
  c.cycles_per_bit = s.get<double>("cycles_per_bit", c.cycles_per_bit);
  c.macro_pathloss = parse_pathloss(s.child("macro_pathloss"), "mecassoc.macro_pathloss",
                                    c.macro_pathloss, defaulted);
  c.small_pathloss = parse_pathloss(s.child("small_pathloss"), "mecassoc.small_pathloss",
                                    c.small_pathloss, defaulted);
  s.done();
}

json mecassoc_json(const mecassoc::Config& c) {
  return json{
      {"region_radius_m", c.region_radius_m},
      {"small_count", c.small_count},
      {"ue_count", c.ue_count},
      {"macro_tx_dbm", c.macro_tx_dbm},
      {"small_tx_dbm", c.small_tx_dbm},
      {"ue_tx_dbm", c.ue_tx_dbm},
      {"ul_bandwidth_hz", c.ul_bandwidth_hz},
      {"noise_figure_db", c.noise_figure_db},
      {"c_small_cycles_per_s", c.c_small_cycles_per_s},
      {"omega", c.omega},
      {"task_bits", c.task_bits},
      {"task_size", c.task_size == mecassoc::Config::TaskSize::Fixed ? "fixed" : "exponential"},
      {"cycles_per_bit", c.cycles_per_bit},
      {"macro_pathloss", pathloss_json(c.macro_pathloss)},
      {"small_pathloss", pathloss_json(c.small_pathloss)},
  };
}

void parse_compcoord(const json& j, compcoord::Config& c,
                     std::vector<std::string>* defaulted) {
  Strict s(j, "compcoord", defaulted);
  c.link = parse_link(s.child("link"), "compcoord.link", c.link, defaulted);
  c.p_low_latency = s.get<double>("p_low_latency", c.p_low_latency);
  c.p_downlink = s.get<double>("p_downlink", c.p_downlink);
  c.interference_ratio = s.get<double>("interference_ratio", c.interference_ratio);
  c.ic_residual = s.get<double>("ic_residual", c.ic_residual);
  c.xn_delay_slots = s.get<int>("xn_delay_slots", c.xn_delay_slots);
  c.episodes = s.get<std::int64_t>("episodes", c.episodes);
  s.done();
}

json compcoord_json(const compcoord::Config& c) {
  return json{
      {"link", link_json(c.link)},
      {"p_low_latency", c.p_low_latency},
      {"p_downlink", c.p_downlink},
      {"interference_ratio", c.interference_ratio},
      {"ic_residual", c.ic_residual},
      {"xn_delay_slots", c.xn_delay_slots},
      {"episodes", c.episodes},
  };
}

}  // namespace

const char* mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::Dupstat: return "dupstat";
    case Mechanism::Ccselect: return "ccselect";
    case Mechanism::Mecassoc: return "mecassoc";
    case Mechanism::Compcoord: return "compcoord";
  }
  return "?";
}

std::optional<Mechanism> mechanism_from_name(const std::string& name) {
  if (name == "dupstat") return Mechanism::Dupstat;
  if (name == "ccselect") return Mechanism::Ccselect;
  if (name == "mecassoc") return Mechanism::Mecassoc;
  if (name == "compcoord") return Mechanism::Compcoord;
  return std::nullopt;
}

void ScenarioConfig::apply_sample_budget(std::int64_t samples) {
  if (samples < 1) throw ConfigError("samples: must be >= 1");
  switch (mechanism) {
    case Mechanism::Dupstat: dup.packet_count = samples; break;
    case Mechanism::Ccselect:
      if (samples > 1'000'000'000) throw ConfigError("samples: out of range for ccselect");
      cc.ue_count = static_cast<int>(samples);
      break;
    case Mechanism::Mecassoc:
      if (samples > 1'000'000'000) throw ConfigError("samples: out of range for mecassoc");
      mec.ue_count = static_cast<int>(samples);
      break;
    case Mechanism::Compcoord: comp.episodes = samples; break;
  }
}

void ScenarioConfig::validate() const {
  if (runs < 1) throw ConfigError("runs: must be >= 1");
  if (!(slot_duration_ms > 0)) throw ConfigError("slot_duration_ms: must be > 0");
  switch (mechanism) {
    case Mechanism::Dupstat: dup.validate(); break;
    case Mechanism::Ccselect: cc.validate(); break;
    case Mechanism::Mecassoc: mec.validate(); break;
    case Mechanism::Compcoord: comp.validate(); break;
  }
}

nlohmann::json ScenarioConfig::echo() const {
  json out{
      {"mechanism", mechanism_name(mechanism)},
      {"master_seed", master_seed},
      {"runs", runs},
      {"slot_duration_ms", slot_duration_ms},
  };
  switch (mechanism) {
    case Mechanism::Dupstat: out["dupstat"] = dupstat_json(dup); break;
    case Mechanism::Ccselect: out["ccselect"] = ccselect_json(cc); break;
    case Mechanism::Mecassoc: out["mecassoc"] = mecassoc_json(mec); break;
    case Mechanism::Compcoord: out["compcoord"] = compcoord_json(comp); break;
  }
  return out;
}

ScenarioConfig parse_config(const nlohmann::json& doc, Mechanism mechanism) {
  ScenarioConfig cfg;
  cfg.mechanism = mechanism;
  Strict s(doc, "", &cfg.defaulted_fields);
  const std::string mech =
      s.get<std::string>("mechanism", mechanism_name(mechanism));
  if (mech != mechanism_name(mechanism))
    throw ConfigError("mechanism: config says '" + mech + "' but the subcommand is '" +
                      std::string(mechanism_name(mechanism)) + "'");
  cfg.master_seed = s.get<std::uint64_t>("master_seed", cfg.master_seed);
  cfg.runs = s.get<int>("runs", cfg.runs);
  cfg.slot_duration_ms = s.get<double>("slot_duration_ms", cfg.slot_duration_ms);
  switch (mechanism) {
    case Mechanism::Dupstat:
      parse_dupstat(s.child("dupstat"), cfg.dup, &cfg.defaulted_fields);
      break;
    case Mechanism::Ccselect:
      parse_ccselect(s.child("ccselect"), cfg.cc, &cfg.defaulted_fields);
      break;
    case Mechanism::Mecassoc:
      parse_mecassoc(s.child("mecassoc"), cfg.mec, &cfg.defaulted_fields);
      break;
    case Mechanism::Compcoord:
      parse_compcoord(s.child("compcoord"), cfg.comp, &cfg.defaulted_fields);
      break;
  }
  s.done();
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path_or_defaults, Mechanism mechanism) {
  if (path_or_defaults == "defaults")
    return parse_config(nlohmann::json::object(), mechanism);
  std::ifstream in(path_or_defaults);
  if (!in) throw ConfigError("cannot open config file: " + path_or_defaults);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path_or_defaults + ": " + e.what());
  }
  return parse_config(doc, mechanism);
}

}  // namespace mcasim
