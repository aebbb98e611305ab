#pragma once

// Command-line front end. `run` takes the arguments after the program name
// and returns the process exit code, so tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace disperse::cli {

enum Exit : int {
  kOk = 0,
  kUnaccepted = 2,   // certificate not met (construct, verify, bench row check)
  kCapExceeded = 3,  // net size or exact-evaluation cap
  kUsage = 64,
  kDataError = 65,   // malformed points file
  kNoInput = 66,     // input file missing
  kSoftware = 70,
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace disperse::cli
