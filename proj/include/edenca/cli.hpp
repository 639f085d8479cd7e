#pragma once

#include <string>
#include <vector>

namespace edenca {

// Entry point behind the `edenca` binary. Exit codes: 0 success/verified,
// 1 usage or malformed input, 2 verification failure, 3 budget exceeded.
int run_cli(const std::vector<std::string>& args);

} // namespace edenca
