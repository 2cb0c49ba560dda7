#pragma once

#include <string>
#include <vector>

namespace eigslab {

inline constexpr const char* kToolVersion = "eigslab 0.1.0";

// Exit codes: 0 success, 1 validation failure, 2 usage error.
int run_cli(const std::vector<std::string>& args);

}  // namespace eigslab
