#include "dephasing/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace dephasing {

namespace {

// Runs body(i) for i in [0, n) across worker threads. Each index is written
// by exactly one worker; the first exception is rethrown on the caller.
template <typename Body>
void parallel_for(std::size_t n, const Body& body) {
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    if (workers == 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < n; i += workers) body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void require_increasing(std::span<const double> grid, const char* what) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument(std::string(what) + ": grid must be strictly increasing");
        }
    }
}

TrajectoryRow make_row(const EnvSpecd& env, const InitStated& init, const DephasingKernelsd& initial,
                       const DephasingKernelsd& k) {
    const QubitStated correlated = rho_correlated(env, init, k);
    const QubitStated product = rho_product(env, init, initial, k);
    const double amplitude = std::abs(init.b_plus * std::conj(init.b_minus));

    TrajectoryRow row;
    row.t = k.t;
    row.distance = trace_distance(correlated, product);
    row.entropy_correlated = linear_entropy(correlated);
    row.entropy_product = linear_entropy(product);
    row.r = k.r;
    row.s = k.s;
    row.phi = k.phi;
    row.abs_a_correlated = std::abs(decoherence_factor(env, init, k).value);
    row.abs_a_product = std::abs(product.coherence) / amplitude;
    return row;
}

}  // namespace

void check_row(const TrajectoryRow& row) {
    constexpr double slack = 1e-12;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("unphysical row at t = " + std::to_string(row.t) + ": " + what);
    };
    if (!(row.distance >= 0 && row.distance <= 1 + slack)) fail("D_T in [0, 1] violated");
    for (double s_l : {row.entropy_correlated, row.entropy_product}) {
        if (!(s_l >= -slack && s_l <= 0.5 + slack)) fail("S_L in [0, 1/2] violated");
    }
    for (double a : {row.abs_a_correlated, row.abs_a_product}) {
        if (!(a <= 1 + slack)) fail("|A| <= 1 violated");
    }
}

std::vector<double> geometric_grid(double first, double ratio, double last, bool include_zero) {
    if (!(first > 0) || !(ratio > 1) || !(last >= first)) {
        throw std::invalid_argument("geometric_grid: requires first > 0, ratio > 1, last >= first");
    }
    std::vector<double> grid;
    if (include_zero) grid.push_back(0.0);
    for (int k = 0;; ++k) {
        const double t = first * std::pow(ratio, k);
        if (t > last * (1 + 1e-12)) break;
        grid.push_back(t);
    }
    return grid;
}

std::vector<double> linear_grid(double first, double last, std::size_t points) {
    if (points < 2 || !(last > first)) {
        throw std::invalid_argument("linear_grid: requires points >= 2 and last > first");
    }
    std::vector<double> grid(points);
    const double step = (last - first) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) grid[i] = first + step * static_cast<double>(i);
    grid.back() = last;
    return grid;
}

std::vector<double> log_grid(double first, double last, std::size_t points) {
    if (!(first > 0)) throw std::invalid_argument("log_grid: requires first > 0");
    auto exponents = linear_grid(std::log10(first), std::log10(last), points);
    for (double& e : exponents) e = std::pow(10.0, e);
    exponents.front() = first;
    exponents.back() = last;
    return exponents;
}

TrajectoryTable trajectory(const EnvSpecd& env, const InitStated& init, std::span<const double> t_grid) {
    env.validate();
    init.validate();
    require_increasing(t_grid, "trajectory");
    if (!t_grid.empty() && !(t_grid.front() >= 0)) {
        throw std::invalid_argument("trajectory: grid must start at t >= 0");
    }
    const DephasingKernelsd initial = kernels_at(env, 0.0);
    TrajectoryTable table;
    table.rows.resize(t_grid.size());
    parallel_for(t_grid.size(), [&](std::size_t i) {
        table.rows[i] = make_row(env, init, initial, kernels_at(env, t_grid[i]));
    });
    return table;
}

double distance_at(const EnvSpecd& env, const InitStated& init, double t) {
    env.validate();
    init.validate();
    const DephasingKernelsd initial = kernels_at(env, 0.0);
    const DephasingKernelsd k = kernels_at(env, t);
    return trace_distance(rho_correlated(env, init, k), rho_product(env, init, initial, k));
}

double distance_limit(const EnvSpecd& env, const InitStated& init) {
    init.validate();
    const DephasingKernelsd limit = kernels_limit(env);
    const double s0 = -displacement_norm_half(env);
    const double amplitude = std::abs(init.b_plus) * std::abs(init.b_minus);
    const double growth = std::exp(s0) * std::expm1(limit.s - s0);
    return amplitude * std::exp(-limit.r) * init.lambda * growth / normalization_c(env, init.lambda);
}

double entropy_gap_limit(const EnvSpecd& env, const InitStated& init) {
    init.validate();
    const DephasingKernelsd limit = kernels_limit(env);
    const double norm = normalization_c(env, init.lambda);
    const double lambda = init.lambda;
    // The carrier phase drops out of |A|, and phi(inf) = 0.
    const double abs_correlated = std::exp(-limit.r) * (1 - lambda + lambda * std::exp(limit.s)) / norm;
    const double abs_product = std::abs(decoherence_factor(env, init, 0.0).value) * std::exp(-limit.r);
    return detail::entropy_from_factor(init, abs_product) - detail::entropy_from_factor(init, abs_correlated);
}

std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::alpha:
            return "alpha";
        case SweepParameter::gamma:
            return "gamma";
        case SweepParameter::mu:
            return "mu";
        case SweepParameter::lambda:
            return "lambda";
    }
    return "?";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) {
    for (auto p : {SweepParameter::alpha, SweepParameter::gamma, SweepParameter::mu, SweepParameter::lambda}) {
        if (name == to_string(p)) return p;
    }
    return std::nullopt;
}

SweepTable sweep(const EnvSpecd& base, const InitStated& init, SweepParameter parameter,
                 std::span<const double> grid, const SweepOptions& options) {
    base.validate();
    init.validate();
    require_increasing(grid, "sweep");

    const double alpha_dimless = base.alpha_dimless();
    const double gamma_dimless = base.gamma_dimless();

    SweepTable table;
    table.parameter = parameter;
    table.fixed = {
        {"alpha_dimless", alpha_dimless}, {"gamma_dimless", gamma_dimless}, {"mu", base.mu},
        {"nu", base.nu},                  {"omega_c", base.omega_c},       {"lambda", init.lambda},
        {"epsilon", init.epsilon},        {"p_plus", std::norm(init.b_plus)},
        {"at_time", options.at_time.value_or(std::numeric_limits<double>::infinity())},
    };
    switch (parameter) {
        case SweepParameter::alpha:
            table.fixed.erase("alpha_dimless");
            break;
        case SweepParameter::gamma:
            table.fixed.erase("gamma_dimless");
            break;
        case SweepParameter::mu:
            table.fixed.erase("mu");
            break;
        case SweepParameter::lambda:
            table.fixed.erase("lambda");
            break;
    }

    table.rows.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const double value = grid[i];
        EnvSpecd env = base;
        InitStated point = init;
        switch (parameter) {
            case SweepParameter::alpha:
                env.alpha = options.raw ? value : value / std::pow(env.omega_c, env.mu);
                break;
            case SweepParameter::gamma:
                env.gamma = options.raw ? value : value / std::pow(env.omega_c, env.nu);
                break;
            case SweepParameter::mu:
                env.mu = value;
                env.alpha = alpha_dimless / std::pow(env.omega_c, value);
                break;
            case SweepParameter::lambda:
                point.lambda = value;
                break;
        }
        const double d = options.at_time ? distance_at(env, point, *options.at_time) : distance_limit(env, point);
        table.rows[i] = SweepRow{value, d};
    });
    return table;
}

std::string_view to_string(ExtremumKind k) {
    switch (k) {
        case ExtremumKind::none:
            return "none";
        case ExtremumKind::max:
            return "max";
        case ExtremumKind::min:
            return "min";
    }
    return "?";
}

Extremum detect_extremum(const SweepTable& table) {
    const auto& rows = table.rows;
    if (rows.size() < 3) return {};
    const auto by_distance = [](const SweepRow& a, const SweepRow& b) { return a.distance < b.distance; };
    const double first = rows.front().distance;
    const double last = rows.back().distance;

    // max_element/min_element return the first of equal elements, i.e. the
    // smallest sweep value.
    const auto top = std::max_element(rows.begin(), rows.end(), by_distance);
    if (top != rows.begin() && top != rows.end() - 1 && top->distance > first && top->distance > last) {
        return Extremum{ExtremumKind::max, top->value, top->distance};
    }
    const auto bottom = std::min_element(rows.begin(), rows.end(), by_distance);
    if (bottom != rows.begin() && bottom != rows.end() - 1 && bottom->distance < first && bottom->distance < last) {
        return Extremum{ExtremumKind::min, bottom->value, bottom->distance};
    }
    return {};
}

std::optional<double> saturation_time(const EnvSpecd& env, const InitStated& init, double tol,
                                      const SaturationOptions& options) {
    if (!(tol > 0)) throw std::invalid_argument("saturation_time: tol > 0 violated");
    if (!(options.first > 0) || !(options.horizon >= options.first)) {
        throw std::invalid_argument("saturation_time: requires 0 < first <= horizon");
    }
    const double limit = distance_limit(env, init);
    const std::vector<double> grid = geometric_grid(options.first, 2.0, options.horizon, true);

    // Walk backwards from the horizon; the answer is the earliest point of the
    // final run of in-tolerance grid times.
    std::optional<double> settled;
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) {
        if (std::abs(distance_at(env, init, *it) - limit) > tol * limit) break;
        settled = *it;
    }
    return settled;
}

}  // namespace dephasing
