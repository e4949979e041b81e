#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "casimir/config.hpp"

namespace casimir::cli {

enum class ScenarioKind {
    pressure,
    temperature_sweep,
    reflection_table,
    sphere_modes,
    oracle_run,
    validate
};

struct RunResult {
    int exit_code = 0;  // 0 ok, 2 config error, 3 numeric non-convergence
    std::vector<std::string> outputs;
};

/// Executes one scenario: computes, writes the output table and the run
/// manifest next to it. Throws ConfigError / num::NonConvergence for the
/// CLI driver to map onto exit codes.
RunResult run_scenario(ScenarioKind kind, const Config& config,
                       const std::filesystem::path& out_dir);

/// Full command-line driver: casimir <pressure|sweep|reflect|sphere|oracle|validate>
/// [config] [--out DIR] [--full].
int run_cli(int argc, const char* const* argv);

}  // namespace casimir::cli
