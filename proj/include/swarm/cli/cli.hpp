#pragma once

// swarmsim command line: simulate, recommend, rules, serve, replay.
//
// Exit status: 0 success, 1 I/O or runtime failure, 2 usage or configuration error.

#include <ostream>
#include <string>
#include <vector>

namespace swarm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace swarm::cli
