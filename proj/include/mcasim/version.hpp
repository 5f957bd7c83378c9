// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#pragma once

namespace mcasim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mcasim
