// gamma.hpp - Euler Gamma function on the range the dephasing kernels need

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dephasing {

/// Thrown when a parameter falls outside the domain of a closed-form kernel
/// (Gamma poles, sub-ohmic limits, invalid environment or initial state).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

// Lanczos approximation, g = 7, n = 9. Relative error is below 1e-15 for
// real arguments >= 1/2.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs{
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

template <typename Scalar>
Scalar lanczos_gamma(Scalar x) {
    // Gamma(x) for x >= 1/2, evaluated as Gamma(z + 1) with z = x - 1.
    const Scalar z = x - Scalar(1);
    Scalar sum = Scalar(kLanczosCoeffs[0]);
    for (std::size_t k = 1; k < kLanczosCoeffs.size(); ++k) {
        sum += Scalar(kLanczosCoeffs[k]) / (z + Scalar(k));
    }
    const Scalar tt = z + Scalar(kLanczosG) + Scalar(0.5);
    const Scalar sqrt_two_pi = std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar>);
    return sqrt_two_pi * std::pow(tt, z + Scalar(0.5)) * std::exp(-tt) * sum;
}

}  // namespace detail

/// Euler Gamma function for x > -1, x != 0.
///
/// Arguments below 1/2 go through the reflection formula
/// Gamma(x) Gamma(1 - x) = pi / sin(pi x), which covers (-1, 0) and (0, 1/2).
/// Throws DomainError at the pole x = 0 and for x <= -1, which the kernels
/// never need.
template <typename Scalar>
Scalar gamma_fn(Scalar x) {
    if (!std::isfinite(x)) {
        throw DomainError("gamma_fn: non-finite argument");
    }
    if (x <= Scalar(-1)) {
        throw DomainError("gamma_fn: argument " + std::to_string(static_cast<double>(x)) +
                          " <= -1 is outside the supported range");
    }
    if (x == Scalar(0)) {
        throw DomainError("gamma_fn: pole at x = 0");
    }
    if (x < Scalar(0.5)) {
        const Scalar pi = std::numbers::pi_v<Scalar>;
        return pi / (std::sin(pi * x) * detail::lanczos_gamma(Scalar(1) - x));
    }
    return detail::lanczos_gamma(x);
}

}  // namespace dephasing
