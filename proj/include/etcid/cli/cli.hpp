// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace etcid::cli {

/// Process exit codes. Stable across releases.
enum ExitCode : int {
  kOk = 0,
  kNoMatch = 1,          // identify: no database entry accepted
  kUsage = 2,            // bad or missing flags
  kIoError = 3,
  kFormatError = 4,      // malformed JPEG / PNM / feature file / manifest
  kDimensionError = 5,   // image not a multiple of 8 (see --crop) or too small
  kKeyError = 6,         // seed or key file problem
  kInvalidArgument = 7,  // value out of range, e.g. N > M
  kInternalError = 70,
};

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace etcid::cli
