// cli.hpp - command-line front end: trajectory, sweep and verify subcommands

#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dephasing/quadrature.hpp"

namespace dephasing::cli {

inline constexpr std::string_view kToolName = "dephasing";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Relative output paths are resolved against this directory when it is set.
inline constexpr const char* kOutputDirEnv = "DEPHASING_OUTPUT_DIR";

enum ExitCode : int {
    kSuccess = 0,
    kFailure = 1,  // validation, verification, numerical or I/O failure
    kUsage = 2,
};

struct RunConfig {
    std::string subcommand;

    // Environment, dimensionless mode (omega_c = 1) ...
    std::optional<double> alpha_dimless;
    std::optional<double> gamma_dimless;
    // ... or raw mode.
    std::optional<double> alpha;
    std::optional<double> gamma;
    std::optional<double> omega_c;
    std::optional<double> mu;
    std::optional<double> nu;

    // Qubit
    double epsilon = 1.0;
    double lambda = 1.0;
    double p_plus = 0.5;

    // trajectory time grid
    std::string grid = "geometric";  // geometric | linear
    double t_first = 1e-2;
    double ratio = 1.05;
    double t_max = 1e3;
    std::size_t points = 1001;
    bool include_zero = false;

    // sweep
    std::string param;
    std::optional<double> from;
    std::optional<double> to;
    std::optional<std::size_t> sweep_points;
    std::optional<std::string> scale;  // log | linear
    std::string at_time = "inf";
    bool sweep_raw = false;

    // verify
    double tolerance = 1e-8;
    double abs_floor = 1e-12;
    QuadSpec quad;

    std::string output;
};

/// Parses and runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_trajectory(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace dephasing::cli
