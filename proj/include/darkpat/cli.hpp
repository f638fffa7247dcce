#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace darkpat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPipeline = 1;
inline constexpr int kExitIo = 2;

// Runs one command. args[0] is the program name. Never throws; failures are
// reported on `err` as a single `error: <kind>: <message>` line.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace darkpat::cli
