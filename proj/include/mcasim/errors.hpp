// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <stdexcept>
#include <string>

namespace mcasim {

// Invalid or out-of-range configuration. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Event scheduled into the past, or similar queue misuse.
struct SchedulingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runtime failure inside a run; carries the offending event identity when
// raised from a dispatch.
struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mcasim
