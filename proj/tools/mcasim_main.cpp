// Copyright the mcasim contributors. Licensed under the terms of the
// Apache 2.0 license. See LICENSE in the project root.
#include "mcasim/runner.hpp"

int main(int argc, char** argv) { return mcasim::cli_main(argc, argv); }
