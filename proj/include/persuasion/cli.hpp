#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace persuasion {

// Exit codes: 0 success/pass/found, 2 parse error, 3 geometry or subset
// limit exceeded, 4 fail/none/refuted, 5 plot on a game that is not
// two-state.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace persuasion
