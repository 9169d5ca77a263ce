#pragma once

#include <string>
#include <vector>

namespace dyad {

// Subcommand dispatch for the workbench binary. Exit codes: 0 success,
// 1 partial failure (some conversations aborted, or a fit could not be
// estimated), 2 configuration/usage error.
int cli_dispatch(int argc, const char* const* argv);
int cli_dispatch(const std::vector<std::string>& args);

}  // namespace dyad
