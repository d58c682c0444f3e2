#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fif::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitNonConvergence = 2;

// Runs one command line (without the program name). Results go to --out files when
// given, otherwise to `out`; diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

// Full usage text for every subcommand and flag.
std::string flags_reference();

} // namespace fif::cli
