#pragma once

#include "truncmc/run_config.hpp"

namespace truncmc {

inline constexpr const char* kVersion = "0.1.0";

// Executes the configured mode and writes all output files under
// cfg.out_dir. Returns a process exit status (0 on success).
int run(const RunConfig& cfg);

}  // namespace truncmc
