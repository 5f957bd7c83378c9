// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcasim/ccselect.hpp"
#include "mcasim/compcoord.hpp"
#include "mcasim/dupstat.hpp"
#include "mcasim/mecassoc.hpp"

namespace mcasim {

enum class Mechanism { Dupstat, Ccselect, Mecassoc, Compcoord };

const char* mechanism_name(Mechanism m);
std::optional<Mechanism> mechanism_from_name(const std::string& name);

// Top-level scenario: exactly one mechanism block is active; every numeric
// parameter is validated at load and every default is recorded for the echo.
struct ScenarioConfig {
  Mechanism mechanism = Mechanism::Dupstat;
  std::uint64_t master_seed = 1;
  int runs = 1;
  double slot_duration_ms = 1.0;

  dupstat::Config dup;
  ccselect::Config cc;
  mecassoc::Config mec;
  compcoord::Config comp;

  std::vector<std::string> defaulted_fields;

  // Override the mechanism's principal sample count (--samples).
  void apply_sample_budget(std::int64_t samples);

  void validate() const;

  // Fully-resolved configuration; parsing the echo reproduces this config.
  nlohmann::json echo() const;
};

// Strict parse: unknown keys anywhere are rejected with a field path, as are
// out-of-range values. The mechanism comes from the CLI subcommand; a
// "mechanism" key in the document must agree.
ScenarioConfig parse_config(const nlohmann::json& doc, Mechanism mechanism);

// Loads a config file; the literal "defaults" stands for an empty document.
ScenarioConfig load_config(const std::string& path_or_defaults, Mechanism mechanism);

}  // namespace mcasim
