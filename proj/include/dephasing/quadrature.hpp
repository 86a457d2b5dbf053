// quadrature.hpp - adaptive quadrature oracle for the semi-infinite spectral
// integrals behind r(t), s(t) and phi(t)

#pragma once

#include <stdexcept>
#include <string>

#include "dephasing/kernels.hpp"

namespace dephasing {

struct QuadSpec {
    double rel_tol{1e-10};
    double abs_tol{1e-14};
    int max_subdivisions{2000};

    void validate() const;
};

struct QuadResult {
    double value{0};
    double abs_error{0};   // estimated, includes the analytic tail bound
    int subdivisions{0};   // bisections beyond the initial panel layout
};

/// Raised when the adaptive scheme exhausts max_subdivisions before meeting
/// the requested tolerance. Carries the error estimate it did reach.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double value, double estimate)
        : std::runtime_error(what), value_(value), estimate_(estimate) {}

    double value() const { return value_; }
    double achieved_error() const { return estimate_; }

private:
    double value_;
    double estimate_;
};

enum class Oscillation {
    none,           // 1
    one_minus_cos,  // 1 - cos(w t)
    sine,           // sin(w t)
};

/// int_0^inf dw weight w^(exponent-1) exp(-w/omega_c) osc(w t).
///
/// The interval is cut at omega_max = omega_c (A + B ln(1/abs_tol)); the tail
/// beyond it is bounded analytically and folded into the error estimate. The
/// first panel uses a power substitution w = a v^q so that integrable
/// endpoint singularities w^(e-1), e in (0, 1), become smooth.
QuadResult integrate_spectral(double weight, double exponent, Oscillation osc, double t,
                              double omega_c, const QuadSpec& q = {});

/// 4 int g_h^2(w) [1 - cos(w t)] dw.
QuadResult integrate_r(const EnvSpecd& env, double t, const QuadSpec& q = {});

/// 2 int g_h(w) f(w) [1 - cos(w t)] dw - (1/2) int f^2(w) dw, both by quadrature.
QuadResult integrate_s(const EnvSpecd& env, double t, const QuadSpec& q = {});

/// int g_h(w) f(w) sin(w t) dw.
QuadResult integrate_phi(const EnvSpecd& env, double t, const QuadSpec& q = {});

}  // namespace dephasing
