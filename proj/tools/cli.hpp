#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hamforge::cli {

// Exit codes: 0 pass, 1 check failure, 2 bad arguments or parameters,
// 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hamforge::cli
