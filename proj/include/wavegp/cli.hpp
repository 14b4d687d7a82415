#pragma once

#include <string>
#include <vector>

#include "wavegp/config.hpp"
#include "wavegp/fdtd.hpp"

namespace wavegp {

inline constexpr const char* kVersion = "1.0.0";

FDTDConfig fdtd_config_from(const Config& cfg);
// prefix is "ic.u" or "ic.v"
InitialCondition initial_condition_from(const Config& cfg, const std::string& prefix);

// Entry point of the `wavegp` executable. Returns the process exit code.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace wavegp
