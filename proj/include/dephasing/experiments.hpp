// experiments.hpp - trajectories, long-time sweeps and their summaries

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dephasing/metrics.hpp"
#include "dephasing/model.hpp"

namespace dephasing {

struct TrajectoryRow {
    double t{0};
    double distance{0};            // D_T[rho_lambda(t), rho_p(t)]
    double entropy_correlated{0};  // S_L[rho_lambda(t)]
    double entropy_product{0};     // S_L[rho_p(t)]
    double r{0};
    double s{0};
    double phi{0};
    double abs_a_correlated{0};  // |A_lambda(t)|
    double abs_a_product{0};     // |A_lambda(0) A_0(t)|
};

struct TrajectoryTable {
    std::vector<TrajectoryRow> rows;
};

/// Throws std::runtime_error naming the broken bound if a row is unphysical:
/// D_T outside [0, 1], S_L outside [0, 1/2] or |A| > 1 (each with 1e-12 slack).
void check_row(const TrajectoryRow& row);

/// first, first*ratio, ... up to last (inclusive within rounding); optional leading 0.
std::vector<double> geometric_grid(double first, double ratio, double last, bool include_zero = false);
std::vector<double> linear_grid(double first, double last, std::size_t points);
std::vector<double> log_grid(double first, double last, std::size_t points);

/// Grid points are independent and evaluated in parallel; rows come back in
/// grid order. The grid must be strictly increasing and start at t >= 0.
TrajectoryTable trajectory(const EnvSpecd& env, const InitStated& init, std::span<const double> t_grid);

/// D_T between the correlated and product trajectories at one time.
double distance_at(const EnvSpecd& env, const InitStated& init, double t);

/// Analytic long-time distance |b_+ b_-| e^{-r_inf} C^-1 lambda (e^{s_inf} - e^{s(0)}).
/// Requires mu > 0.
double distance_limit(const EnvSpecd& env, const InitStated& init);

/// S_L[rho_p] - S_L[rho_lambda] as t -> infinity, from the limit kernels.
/// Requires mu > 0.
double entropy_gap_limit(const EnvSpecd& env, const InitStated& init);

enum class SweepParameter { alpha, gamma, mu, lambda };

std::string_view to_string(SweepParameter p);
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);

struct SweepOptions {
    std::optional<double> at_time;  // empty: analytic t -> infinity limit
    bool raw = false;               // alpha/gamma grid values are raw, not alpha*omega_c^mu, gamma*omega_c^nu
};

struct SweepRow {
    double value{0};
    double distance{0};
};

struct SweepTable {
    SweepParameter parameter{SweepParameter::alpha};
    std::vector<SweepRow> rows;
    std::map<std::string, double> fixed;  // the parameters held constant
};

/// D_T per grid point. For the mu sweep alpha is re-derived at every point so
/// that alpha*omega_c^mu keeps its configured value.
SweepTable sweep(const EnvSpecd& base, const InitStated& init, SweepParameter parameter,
                 std::span<const double> grid, const SweepOptions& options = {});

enum class ExtremumKind { none, max, min };

std::string_view to_string(ExtremumKind k);

struct Extremum {
    ExtremumKind kind{ExtremumKind::none};
    double location{0};
    double value{0};
};

/// Strict interior extremum of a sweep: the global maximum if it lies off both
/// endpoints, else the global minimum under the same rule, else none. Ties go
/// to the smallest sweep value.
Extremum detect_extremum(const SweepTable& table);

struct SaturationOptions {
    double first = 1e-2;   // first nonzero grid time
    double horizon = 1e12;  // give up beyond this time
};

/// Smallest time T on the grid {0, first, 2 first, 4 first, ...} such that
/// |D_T(t) - D_T(inf)| <= tol D_T(inf) at every grid time t >= T up to the
/// horizon. Empty when the distance has not saturated by the horizon.
std::optional<double> saturation_time(const EnvSpecd& env, const InitStated& init, double tol,
                                      const SaturationOptions& options = {});

}  // namespace dephasing
