// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include <doctest.h>

#include <algorithm>

#include "mcasim/config.hpp"

using namespace mcasim;
using nlohmann::json;

TEST_CASE("an empty document yields all defaults and lists every defaulted field") {
  const ScenarioConfig cfg = parse_config(json::object(), Mechanism::Dupstat);
  CHECK(cfg.master_seed == 1);
  CHECK(cfg.runs == 1);
  CHECK(cfg.dup.harq_rtt_slots == 4);
  CHECK(cfg.dup.report_delay_slots == 1);
  CHECK(cfg.dup.link.mean_snr_db == doctest::Approx(10.0));
  CHECK(cfg.dup.link.target_snr_db == doctest::Approx(0.0));
  auto listed = [&](const char* name) {
    return std::find(cfg.defaulted_fields.begin(), cfg.defaulted_fields.end(), name) !=
           cfg.defaulted_fields.end();
  };
  CHECK(listed("master_seed"));
  CHECK(listed("dupstat.harq_rtt_slots"));
  CHECK(listed("dupstat.link.mean_snr_db"));
}

TEST_CASE("unknown keys are rejected with their path") {
  json doc{{"dupstat", {{"harq_rtt_slotz", 4}}}};
  try {
    parse_config(doc, Mechanism::Dupstat);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("dupstat.harq_rtt_slotz") != std::string::npos);
  }
}

TEST_CASE("out-of-range values name the offending field") {
  SUBCASE("negative bandwidth") {
    json doc{{"ccselect", {{"cc_bandwidth_hz", -1.4e6}}}};
    try {
      parse_config(doc, Mechanism::Ccselect);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("cc_bandwidth_hz") != std::string::npos);
    }
  }
  SUBCASE("threshold above one") {
    json doc{{"ccselect", {{"threshold", 1.5}}}};
    CHECK_THROWS_AS(parse_config(doc, Mechanism::Ccselect), ConfigError);
  }
  SUBCASE("probability out of range") {
    json doc{{"compcoord", {{"p_low_latency", -0.5}}}};
    CHECK_THROWS_AS(parse_config(doc, Mechanism::Compcoord), ConfigError);
  }
}

TEST_CASE("mechanism key must agree with the subcommand") {
  json doc{{"mechanism", "ccselect"}};
  CHECK_THROWS_AS(parse_config(doc, Mechanism::Dupstat), ConfigError);
  CHECK_NOTHROW(parse_config(doc, Mechanism::Ccselect));
}

TEST_CASE("wrong types are rejected") {
  json doc{{"master_seed", "not-a-number"}};
  CHECK_THROWS_AS(parse_config(doc, Mechanism::Dupstat), ConfigError);
}

TEST_CASE("the echo round-trips to an identical configuration") {
  json doc{{"master_seed", 99},
           {"runs", 3},
           {"mecassoc", {{"omega", 3.5}, {"ue_count", 123}}}};
  const ScenarioConfig cfg = parse_config(doc, Mechanism::Mecassoc);
  const json echo = cfg.echo();
  CHECK(echo.at("master_seed") == 99);
  CHECK(echo.at("mecassoc").at("omega") == doctest::Approx(3.5));
  const ScenarioConfig again = parse_config(echo, Mechanism::Mecassoc);
  CHECK(again.echo() == echo);
  CHECK(again.defaulted_fields.empty());  // a full echo defaults nothing
}

TEST_CASE("sample budget override lands on the mechanism's principal count") {
  ScenarioConfig cfg = parse_config(json::object(), Mechanism::Dupstat);
  cfg.apply_sample_budget(5000);
  CHECK(cfg.dup.packet_count == 5000);
  cfg = parse_config(json::object(), Mechanism::Compcoord);
  cfg.apply_sample_budget(777);
  CHECK(cfg.comp.episodes == 777);
  cfg = parse_config(json::object(), Mechanism::Ccselect);
  cfg.apply_sample_budget(50);
  CHECK(cfg.cc.ue_count == 50);
  CHECK_THROWS_AS(cfg.apply_sample_budget(0), ConfigError);
}

TEST_CASE("load_config understands the defaults literal and missing files") {
  const ScenarioConfig cfg = load_config("defaults", Mechanism::Compcoord);
  CHECK(cfg.comp.episodes == 200'000);
  CHECK_THROWS_AS(load_config("/nonexistent/path.json", Mechanism::Dupstat), ConfigError);
}
