// kernels.hpp - closed-form dephasing kernels r(t), s(t), phi(t) for a
// power-law spectral density with exponential cutoff

#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "dephasing/gamma.hpp"

namespace dephasing {

/// Environment and coupling parameters.
///
/// Spectral density g_h^2(w) = alpha w^(mu-1) exp(-w/omega_c) and coherent
/// displacement profile f^2(w) = gamma w^(nu-1) exp(-w/omega_c). Time is
/// measured in units of 1/omega_c.
template <typename Scalar>
struct EnvSpec {
    Scalar alpha{0};    // coupling strength
    Scalar mu{1};       // ohmicity exponent
    Scalar gamma{0};    // coherent-amplitude strength
    Scalar nu{1};       // coherent-profile exponent
    Scalar omega_c{1};  // cutoff frequency

    /// Builds a spec from the dimensionless products alpha*omega_c^mu and
    /// gamma*omega_c^nu, with omega_c = 1.
    static EnvSpec dimensionless(Scalar alpha_dimless, Scalar mu, Scalar gamma_dimless, Scalar nu) {
        return EnvSpec{alpha_dimless, mu, gamma_dimless, nu, Scalar(1)};
    }

    /// Exponent of the cross term g_h(w) f(w).
    Scalar kappa() const { return (mu + nu) / Scalar(2); }
    Scalar alpha_dimless() const { return alpha * std::pow(omega_c, mu); }
    Scalar gamma_dimless() const { return gamma * std::pow(omega_c, nu); }

    void validate() const {
        auto fail = [](const std::string& what) { throw DomainError("EnvSpec: " + what); };
        if (!std::isfinite(alpha) || !std::isfinite(mu) || !std::isfinite(gamma) ||
            !std::isfinite(nu) || !std::isfinite(omega_c)) {
            fail("all parameters must be finite");
        }
        if (alpha < 0) fail("alpha >= 0 violated (alpha = " + std::to_string(double(alpha)) + ")");
        if (gamma < 0) fail("gamma >= 0 violated (gamma = " + std::to_string(double(gamma)) + ")");
        if (omega_c <= 0) fail("omega_c > 0 violated (omega_c = " + std::to_string(double(omega_c)) + ")");
        if (mu <= -1) fail("mu > -1 violated (mu = " + std::to_string(double(mu)) + ")");
        if (mu == 0) fail("mu != 0 violated (ohmic case is not supported)");
        if (nu <= 0) fail("nu > 0 violated (nu = " + std::to_string(double(nu)) + ")");
        if (kappa() == 0) fail("kappa = (mu + nu)/2 != 0 violated");
    }
};

using EnvSpecd = EnvSpec<double>;

/// The triple (r, s, phi) at one time point.
template <typename Scalar>
struct DephasingKernels {
    Scalar t{0};
    Scalar r{0};    // decay exponent, >= 0
    Scalar s{0};    // correlation exponent, s(t) >= s(0)
    Scalar phi{0};  // correlation phase
};

using DephasingKernelsd = DephasingKernels<double>;

namespace detail {

// log(sqrt(1 + tau^2)) without overflow for huge tau.
template <typename Scalar>
Scalar log_hypot1(Scalar tau) {
    if (tau < Scalar(1e100)) {
        return std::log1p(tau * tau) / Scalar(2);
    }
    return std::log(tau);
}

inline void require_time(double t, const char* where) {
    if (!(t >= 0)) {
        throw DomainError(std::string(where) + ": time must be >= 0");
    }
}

}  // namespace detail

/// L(a, m, t) = a Gamma(m) omega_c^m {1 - cos[m arctan(omega_c t)] / (1 + omega_c^2 t^2)^(m/2)},
/// the closed form of int_0^inf dw a w^(m-1) exp(-w/omega_c) [1 - cos(w t)].
///
/// The bracket is evaluated as -expm1(-y) + exp(-y) 2 sin^2(x/2) with
/// y = (m/2) log(1 + tau^2), x = m arctan(tau), which stays accurate at small
/// tau and small m where the naive form cancels.
template <typename Scalar>
Scalar kernel_L(Scalar a, Scalar m, Scalar t, Scalar omega_c = Scalar(1)) {
    detail::require_time(double(t), "kernel_L");
    const Scalar gm = gamma_fn(m);
    const Scalar tau = omega_c * t;
    const Scalar y = m * detail::log_hypot1(tau);
    const Scalar half_x = m * std::atan(tau) / Scalar(2);
    const Scalar sin_half = std::sin(half_x);
    const Scalar bracket = -std::expm1(-y) + std::exp(-y) * Scalar(2) * sin_half * sin_half;
    return a * gm * std::pow(omega_c, m) * bracket;
}

/// (1/2) gamma Gamma(nu) omega_c^nu, i.e. half the squared norm of f.
template <typename Scalar>
Scalar displacement_norm_half(const EnvSpec<Scalar>& env) {
    return env.gamma * gamma_fn(env.nu) * std::pow(env.omega_c, env.nu) / Scalar(2);
}

template <typename Scalar>
DephasingKernels<Scalar> kernels_at(const EnvSpec<Scalar>& env, Scalar t) {
    env.validate();
    detail::require_time(double(t), "kernels_at");
    const Scalar kappa = env.kappa();
    const Scalar cross = std::sqrt(env.alpha * env.gamma);
    const Scalar tau = env.omega_c * t;

    DephasingKernels<Scalar> k;
    k.t = t;
    k.r = Scalar(4) * kernel_L(env.alpha, env.mu, t, env.omega_c);
    k.s = Scalar(2) * kernel_L(cross, kappa, t, env.omega_c) - displacement_norm_half(env);
    k.phi = cross * gamma_fn(kappa) * std::pow(env.omega_c, kappa) * std::sin(kappa * std::atan(tau)) *
            std::exp(-kappa * detail::log_hypot1(tau));
    return k;
}

/// Analytic t -> infinity limit. Requires mu > 0 and kappa > 0 so the
/// oscillatory parts of the kernels decay.
template <typename Scalar>
DephasingKernels<Scalar> kernels_limit(const EnvSpec<Scalar>& env) {
    env.validate();
    if (env.mu <= 0) {
        throw DomainError("kernels_limit: requires mu > 0 (mu = " + std::to_string(double(env.mu)) + ")");
    }
    if (env.kappa() <= 0) {
        throw DomainError("kernels_limit: requires kappa > 0");
    }
    const Scalar kappa = env.kappa();
    const Scalar cross = std::sqrt(env.alpha * env.gamma);
    DephasingKernels<Scalar> k;
    k.t = std::numeric_limits<Scalar>::infinity();
    k.r = Scalar(4) * env.alpha * gamma_fn(env.mu) * std::pow(env.omega_c, env.mu);
    k.s = Scalar(2) * cross * gamma_fn(kappa) * std::pow(env.omega_c, kappa) - displacement_norm_half(env);
    k.phi = Scalar(0);
    return k;
}

/// <Omega_0|Omega_f> = exp(-(1/2) int f^2) = exp(s(0)), in (0, 1].
template <typename Scalar>
Scalar vacuum_overlap(const EnvSpec<Scalar>& env) {
    env.validate();
    return std::exp(-displacement_norm_half(env));
}

}  // namespace dephasing
