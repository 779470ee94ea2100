#pragma once

// CLI command implementations. The binary in tools/ is a thin argument
// parser over these so tests can drive the commands in-process.
// Exit codes: 0 success/satisfied, 1 violated or numeric failure,
// 2 config error, 3 inconclusive.

#include <ostream>
#include <string>
#include <vector>

namespace ltvi {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitInconclusive = 3;

struct RunConfig {
    std::string config_path;  // empty: built-in two-tank defaults
    std::string out_dir = "out";
    std::vector<double> ki_override;
    bool no_antiwindup_run = false;
    unsigned long long seed = 0;
};

/// Built-in scenario description, also shipped as configs/two_tank.cfg.
std::string default_config_text();

int run_simulate(const RunConfig& rc, std::ostream& log);
int run_analyze(const RunConfig& rc, std::ostream& log);
int run_ti(const RunConfig& rc, std::ostream& log);

}  // namespace ltvi
