#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sampcap::cli {

// Runs one invocation; args excludes the program name. Returns the process
// exit code: 0 ok, 2 validation, 3 nonconvergence, 4 infeasible design,
// 5 no usable spectrum, 6 alias window too small, 7 degenerate sampler,
// 8 singular noise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sampcap::cli
