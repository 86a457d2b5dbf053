#include "dephasing/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "dephasing/experiments.hpp"
#include "dephasing/io.hpp"
#include "dephasing/quadrature.hpp"

namespace dephasing::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr double kDefaultAlphaDimless = 0.01;
constexpr double kDefaultGammaDimless = 0.05;
constexpr double kDefaultMu = 0.01;
constexpr double kDefaultNu = 0.2;

bool raw_mode(const RunConfig& c) { return c.alpha || c.gamma || c.omega_c; }

bool env_given(const RunConfig& c) {
    return c.alpha_dimless || c.gamma_dimless || c.alpha || c.gamma || c.omega_c || c.mu || c.nu;
}

EnvSpecd resolve_env(const RunConfig& c) {
    if (raw_mode(c) && (c.alpha_dimless || c.gamma_dimless)) {
        throw UsageError("--alpha/--gamma/--omega-c (raw mode) cannot be mixed with --alpha-dimless/--gamma-dimless");
    }
    const double mu = c.mu.value_or(kDefaultMu);
    const double nu = c.nu.value_or(kDefaultNu);
    EnvSpecd env = raw_mode(c) ? EnvSpecd{c.alpha.value_or(kDefaultAlphaDimless), mu,
                                          c.gamma.value_or(kDefaultGammaDimless), nu, c.omega_c.value_or(1.0)}
                               : EnvSpecd::dimensionless(c.alpha_dimless.value_or(kDefaultAlphaDimless), mu,
                                                         c.gamma_dimless.value_or(kDefaultGammaDimless), nu);
    env.validate();
    return env;
}

InitStated resolve_init(const RunConfig& c) {
    if (!(c.p_plus > 0 && c.p_plus < 1)) {
        throw DomainError("InitState: --p-plus in (0, 1) violated (both amplitudes must be non-zero)");
    }
    auto init = InitStated::from_population(c.p_plus, c.lambda, c.epsilon);
    init.validate();
    return init;
}

json number(double x) {
    if (std::isfinite(x)) return x;
    return io::format_double(x);
}

json env_json(const EnvSpecd& env, bool raw) {
    return json{
        {"mode", raw ? "raw" : "dimensionless"},
        {"alpha", env.alpha},
        {"gamma", env.gamma},
        {"omega_c", env.omega_c},
        {"mu", env.mu},
        {"nu", env.nu},
        {"alpha_dimless", env.alpha_dimless()},
        {"gamma_dimless", env.gamma_dimless()},
    };
}

json quad_json(const QuadSpec& q) {
    return json{{"rel_tol", q.rel_tol}, {"abs_tol", q.abs_tol}, {"max_subdivisions", q.max_subdivisions}};
}

fs::path resolve_output(const RunConfig& c, const std::string& fallback) {
    fs::path p = c.output.empty() ? fs::path(fallback) : fs::path(c.output);
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0' && p.is_relative()) {
        p = fs::path(dir) / p;
    }
    return p;
}

void emit(const std::string& subcommand, const json& config, const fs::path& path, const std::string& csv,
          std::ostream& out) {
    io::write_file(path, csv);
    const json manifest = io::make_manifest(subcommand, config, path, csv);
    io::write_file(io::manifest_path(path), manifest.dump(2) + "\n");
    out << path.generic_string() << '\n';
}

std::vector<double> time_grid(const RunConfig& c) {
    if (c.grid == "geometric") {
        return geometric_grid(c.t_first, c.ratio, c.t_max, c.include_zero);
    }
    if (c.grid == "linear") {
        return linear_grid(c.include_zero ? 0.0 : c.t_first, c.t_max, c.points);
    }
    throw UsageError("--grid must be 'geometric' or 'linear'");
}

struct SweepDefaults {
    double from;
    double to;
    std::size_t points;
    const char* scale;
};

SweepDefaults sweep_defaults(SweepParameter p) {
    switch (p) {
        case SweepParameter::alpha:
            return {1e-4, 10.0, 121, "log"};
        case SweepParameter::gamma:
            return {1e-3, 2.0, 121, "log"};
        case SweepParameter::mu:
            return {0.5, 4.0, 141, "linear"};
        case SweepParameter::lambda:
            return {0.0, 1.0, 101, "linear"};
    }
    return {0, 1, 2, "linear"};
}

// ---- verify -------------------------------------------------------------

struct Comparison {
    std::string kernel;
    EnvSpecd env;
    double t{0};
    double closed{0};
    double oracle{0};
    double abs_error{0};
    double rel_error{0};
    bool floor_rule{false};  // |oracle| < 1e-4: judged on absolute error
    bool pass{false};
    std::string note;
};

std::vector<EnvSpecd> verification_points(const RunConfig& c) {
    std::vector<EnvSpecd> envs;
    for (double mu : {-0.5, 0.01, 0.2, 1.0, 2.0}) {
        for (double nu : {0.2, 1.0}) {
            envs.push_back(EnvSpecd::dimensionless(kDefaultAlphaDimless, mu, kDefaultGammaDimless, nu));
        }
    }
    if (env_given(c)) envs.push_back(resolve_env(c));
    return envs;
}

std::string describe(const EnvSpecd& env, double t) {
    std::ostringstream s;
    s << "alpha=" << env.alpha << " mu=" << env.mu << " gamma=" << env.gamma << " nu=" << env.nu
      << " omega_c=" << env.omega_c << " t=" << t;
    return s.str();
}

}  // namespace

int cmd_trajectory(const RunConfig& c, std::ostream& out, std::ostream&) {
    const EnvSpecd env = resolve_env(c);
    const InitStated init = resolve_init(c);
    const std::vector<double> grid = time_grid(c);
    const TrajectoryTable table = trajectory(env, init, grid);
    for (const auto& row : table.rows) check_row(row);

    json config{
        {"env", env_json(env, raw_mode(c))},
        {"init", {{"p_plus", c.p_plus}, {"lambda", c.lambda}, {"epsilon", c.epsilon}}},
        {"grid",
         {{"kind", c.grid},
          {"t_first", c.t_first},
          {"ratio", c.ratio},
          {"t_max", c.t_max},
          {"points", c.points},
          {"include_zero", c.include_zero},
          {"rows", table.rows.size()}}},
    };
    emit("trajectory", config, resolve_output(c, "trajectory.csv"), io::trajectory_csv(table), out);
    return kSuccess;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream&) {
    const auto parameter = parse_sweep_parameter(c.param);
    if (!parameter) throw UsageError("--param must be one of alpha, gamma, mu, lambda");
    const EnvSpecd env = resolve_env(c);
    const InitStated init = resolve_init(c);

    const SweepDefaults defaults = sweep_defaults(*parameter);
    const double from = c.from.value_or(defaults.from);
    const double to = c.to.value_or(defaults.to);
    const std::size_t points = c.sweep_points.value_or(defaults.points);
    const std::string scale = c.scale.value_or(defaults.scale);
    std::vector<double> grid;
    if (scale == "log") {
        grid = log_grid(from, to, points);
    } else if (scale == "linear") {
        grid = linear_grid(from, to, points);
    } else {
        throw UsageError("--scale must be 'log' or 'linear'");
    }

    SweepOptions options;
    options.raw = c.sweep_raw;
    if (c.at_time != "inf") {
        double t = 0;
        try {
            std::size_t used = 0;
            t = std::stod(c.at_time, &used);
            if (used != c.at_time.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw UsageError("--at-time must be 'inf' or a number");
        }
        if (!(t >= 0) || !std::isfinite(t)) throw DomainError("--at-time >= 0 violated");
        options.at_time = t;
    }

    const SweepTable table = sweep(env, init, *parameter, grid, options);
    for (const auto& row : table.rows) {
        if (!(row.distance >= 0 && row.distance <= 1 + 1e-12)) {
            throw std::runtime_error("unphysical sweep row at " + std::string(to_string(*parameter)) + " = " +
                                     io::format_double(row.value) + ": D_T in [0, 1] violated");
        }
    }
    const Extremum extremum = detect_extremum(table);

    json fixed = json::object();
    for (const auto& [name, value] : table.fixed) fixed[name] = number(value);
    json config{
        {"env", env_json(env, raw_mode(c))},
        {"init", {{"p_plus", c.p_plus}, {"lambda", c.lambda}, {"epsilon", c.epsilon}}},
        {"sweep",
         {{"param", std::string(to_string(*parameter))},
          {"from", from},
          {"to", to},
          {"points", points},
          {"scale", scale},
          {"raw", c.sweep_raw},
          {"at_time", c.at_time}}},
        {"fixed", fixed},
        {"extremum",
         {{"kind", std::string(to_string(extremum.kind))},
          {"location", number(extremum.kind == ExtremumKind::none ? std::nan("") : extremum.location)},
          {"value", number(extremum.kind == ExtremumKind::none ? std::nan("") : extremum.value)}}},
    };
    const std::string fallback = "sweep_" + std::string(to_string(*parameter)) + ".csv";
    emit("sweep", config, resolve_output(c, fallback), io::sweep_csv(table, extremum), out);
    out << "# extremum: " << to_string(extremum.kind) << " at "
        << io::format_double(extremum.kind == ExtremumKind::none ? std::nan("") : extremum.location) << '\n';
    return kSuccess;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (!(c.tolerance > 0) || !(c.abs_floor > 0)) throw DomainError("--tolerance and --abs-floor must be > 0");
    c.quad.validate();
    const auto start = std::chrono::steady_clock::now();

    std::vector<double> times{0.0};
    for (double t : log_grid(1e-2, 100.0, 20)) times.push_back(t);

    std::vector<Comparison> results;
    for (const EnvSpecd& env : verification_points(c)) {
        for (double t : times) {
            const DephasingKernelsd closed = kernels_at(env, t);
            const std::pair<const char*, double> kernels[] = {{"r", closed.r}, {"s", closed.s}, {"phi", closed.phi}};
            for (const auto& [name, value] : kernels) {
                Comparison cmp;
                cmp.kernel = name;
                cmp.env = env;
                cmp.t = t;
                cmp.closed = value;
                try {
                    const std::string_view k(name);
                    const QuadResult q = k == "r"   ? integrate_r(env, t, c.quad)
                                         : k == "s" ? integrate_s(env, t, c.quad)
                                                    : integrate_phi(env, t, c.quad);
                    cmp.oracle = q.value;
                    cmp.abs_error = std::abs(value - q.value);
                    cmp.rel_error = q.value != 0 ? cmp.abs_error / std::abs(q.value)
                                                 : (cmp.abs_error == 0 ? 0.0 : std::numeric_limits<double>::infinity());
                    cmp.floor_rule = std::abs(q.value) < 1e-4;
                    cmp.pass = cmp.rel_error <= c.tolerance || (cmp.floor_rule && cmp.abs_error <= c.abs_floor);
                } catch (const ConvergenceError& e) {
                    cmp.pass = false;
                    cmp.rel_error = std::numeric_limits<double>::infinity();
                    cmp.note = e.what();
                }
                results.push_back(cmp);
            }
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    out << "kernel  points  max_rel_err   max_abs_err   failures  status\n";
    bool all_pass = true;
    for (const char* name : {"r", "s", "phi"}) {
        std::size_t count = 0;
        std::size_t failures = 0;
        double max_rel = 0;
        double max_abs = 0;
        for (const auto& cmp : results) {
            if (cmp.kernel != name) continue;
            ++count;
            if (!cmp.pass) ++failures;
            max_rel = std::max(max_rel, cmp.rel_error);
            max_abs = std::max(max_abs, cmp.abs_error);
        }
        all_pass = all_pass && failures == 0;
        out << std::left << std::setw(8) << name << std::setw(8) << count << std::setw(14) << std::scientific
            << std::setprecision(3) << max_rel << std::setw(14) << max_abs << std::setw(10) << failures
            << (failures == 0 ? "PASS" : "FAIL") << '\n'
            << std::defaultfloat;
    }
    out << "comparisons: " << results.size() << ", tolerance " << c.tolerance << " relative (" << c.abs_floor
        << " absolute below 1e-4), " << std::fixed << std::setprecision(2) << seconds << " s\n"
        << std::defaultfloat;

    // Worst offender: largest error relative to what the rule allowed.
    const auto badness = [&](const Comparison& cmp) {
        if (!std::isfinite(cmp.rel_error)) return std::numeric_limits<double>::infinity();
        const double rel = cmp.rel_error / c.tolerance;
        return cmp.floor_rule ? std::min(rel, cmp.abs_error / c.abs_floor) : rel;
    };
    const auto worst = std::max_element(results.begin(), results.end(),
                                        [&](const Comparison& a, const Comparison& b) { return badness(a) < badness(b); });
    if (worst != results.end()) {
        std::ostream& where = all_pass ? out : err;
        where << (all_pass ? "worst case: " : "worst offender: ") << worst->kernel << " at "
              << describe(worst->env, worst->t) << ": closed=" << io::format_double(worst->closed)
              << " oracle=" << io::format_double(worst->oracle) << " rel_err=" << worst->rel_error;
        if (!worst->note.empty()) where << " (" << worst->note << ")";
        where << '\n';
    }

    if (!c.output.empty()) {
        std::string csv = "kernel,alpha,mu,gamma,nu,omega_c,t,closed,oracle,abs_err,rel_err,pass\n";
        for (const auto& cmp : results) {
            csv += cmp.kernel;
            for (double v : {cmp.env.alpha, cmp.env.mu, cmp.env.gamma, cmp.env.nu, cmp.env.omega_c, cmp.t, cmp.closed,
                             cmp.oracle, cmp.abs_error, cmp.rel_error}) {
                csv += ',' + io::format_double(v);
            }
            csv += cmp.pass ? ",1\n" : ",0\n";
        }
        json config{{"tolerance", c.tolerance}, {"abs_floor", c.abs_floor}, {"quad", quad_json(c.quad)}};
        if (env_given(c)) config["user_point"] = env_json(resolve_env(c), raw_mode(c));
        emit("verify", config, resolve_output(c, "verify.csv"), csv, out);
    }
    return all_pass ? kSuccess : kFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact pure-dephasing dynamics of a qubit with initial qubit-environment correlations",
                 std::string(kToolName)};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    RunConfig c;
    auto add_model = [&](CLI::App* sub) {
        auto* group = sub->add_option_group("environment");
        group->add_option("--alpha-dimless", c.alpha_dimless, "Coupling alpha*omega_c^mu (omega_c = 1)");
        group->add_option("--gamma-dimless", c.gamma_dimless, "Coherent amplitude gamma*omega_c^nu (omega_c = 1)");
        group->add_option("--alpha", c.alpha, "Raw coupling alpha (raw mode)");
        group->add_option("--gamma", c.gamma, "Raw amplitude gamma (raw mode)");
        group->add_option("--omega-c", c.omega_c, "Cutoff frequency (raw mode)");
        group->add_option("--mu", c.mu, "Ohmicity exponent, mu > -1, mu != 0 (default 0.01)");
        group->add_option("--nu", c.nu, "Coherent-profile exponent, nu > 0 (default 0.2)");
    };
    auto add_qubit = [&](CLI::App* sub) {
        sub->add_option("--eps", c.epsilon, "Qubit energy splitting")->capture_default_str();
        sub->add_option("--lambda", c.lambda, "Correlation strength in [0, 1]")->capture_default_str();
        sub->add_option("--p-plus", c.p_plus, "|b_+|^2 in (0, 1)")->capture_default_str();
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("-o,--output", c.output,
                        std::string("Output CSV path (relative paths resolve against $") + kOutputDirEnv + ")");
    };

    auto* traj = app.add_subcommand("trajectory", "Time evolution of D_T and S_L for both initial states");
    add_model(traj);
    add_qubit(traj);
    add_output(traj);
    traj->add_option("--grid", c.grid, "geometric | linear")->capture_default_str();
    traj->add_option("--t-first", c.t_first, "First nonzero time")->capture_default_str();
    traj->add_option("--ratio", c.ratio, "Geometric grid ratio")->capture_default_str();
    traj->add_option("--t-max", c.t_max, "Last time")->capture_default_str();
    traj->add_option("--points", c.points, "Linear grid points")->capture_default_str();
    traj->add_flag("--include-zero", c.include_zero, "Prepend t = 0");

    auto* sw = app.add_subcommand("sweep", "Long-time distance D_T(inf) over one parameter");
    add_model(sw);
    add_qubit(sw);
    add_output(sw);
    sw->add_option("--param", c.param, "alpha | gamma | mu | lambda")->required();
    sw->add_option("--from", c.from, "Grid start");
    sw->add_option("--to", c.to, "Grid end");
    sw->add_option("--points", c.sweep_points, "Grid points");
    sw->add_option("--scale", c.scale, "log | linear");
    sw->add_option("--at-time", c.at_time, "'inf' for the analytic limit, or a finite time")->capture_default_str();
    sw->add_flag("--sweep-raw", c.sweep_raw, "alpha/gamma grid values are raw, not omega_c-scaled products");

    auto* ver = app.add_subcommand("verify", "Certify closed-form kernels against adaptive quadrature");
    add_model(ver);
    add_output(ver);
    ver->add_option("--tolerance", c.tolerance, "Relative tolerance")->capture_default_str();
    ver->add_option("--abs-floor", c.abs_floor, "Absolute tolerance for values below 1e-4")->capture_default_str();
    ver->add_option("--quad-rel-tol", c.quad.rel_tol, "Quadrature relative tolerance")->capture_default_str();
    ver->add_option("--quad-abs-tol", c.quad.abs_tol, "Quadrature absolute tolerance")->capture_default_str();
    ver->add_option("--quad-max-subdivisions", c.quad.max_subdivisions, "Quadrature bisection budget")
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        if (traj->parsed()) {
            c.subcommand = "trajectory";
            return cmd_trajectory(c, out, err);
        }
        if (sw->parsed()) {
            c.subcommand = "sweep";
            return cmd_sweep(c, out, err);
        }
        c.subcommand = "verify";
        return cmd_verify(c, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kFailure;
    } catch (const std::invalid_argument& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace dephasing::cli
