#pragma once

#include <string>
#include <vector>

namespace latentscope {

/// Full command-line surface. args excludes the program name.
/// Returns 0 on success, 1 on runtime failure, 2 on invalid input.
int run_command(std::vector<std::string> args);

}  // namespace latentscope
