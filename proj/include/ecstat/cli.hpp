#pragma once

#include <string>
#include <vector>

namespace ecstat {

// Exit codes: 0 success, 2 invariant violation (falsified identity),
// 3 resource ceiling, 4 bad input.
int run_cli(const std::vector<std::string>& args);

} // namespace ecstat
