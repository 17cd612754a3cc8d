#pragma once

#include <string>
#include <vector>

namespace sqg {

// Full command-line entry point, minus argv[0]. Returns the process exit
// code: 0 pass, 1 check failed, 2 usage or config error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);

} // namespace sqg
