#pragma once

// The cantor_saw command-line front end as a library call, so tests can run
// it in-process.
//
// Exit codes: 0 success or finding, 1 internal invariant violation,
// 2 usage or parse error, 3 budget exhausted, 4 finite graph,
// 5 construction failure.

#include "cantorsaw/error.hpp"
#include "cantorsaw/serialize.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cantorsaw {

enum ExitCode : int {
    kExitOk = 0,
    kExitInvariant = 1,
    kExitUsage = 2,
    kExitBudget = 3,
    kExitFinite = 4,
    kExitConstruction = 5,
};

int exit_code_for(ErrorKind kind);

// Runs init_state and extend_level up to `depth`, with an order check after
// every level, and returns the manifest. `final_state` receives the last state.
Json build_manifest(const DriverConfig& config, std::size_t depth, TableSource& source,
                    ConstructionState* final_state = nullptr);

// "Z^K x Z" or "H3 x Z", whitespace-insensitive.
HVariant parse_group_family(const std::string& text);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cantorsaw
