// model.hpp - reduced qubit dynamics under pure dephasing, from a correlated
// qubit-environment start and from the matching product state

#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Core>

#include "dephasing/kernels.hpp"

namespace dephasing {

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

/// Qubit amplitudes and correlation strength of the composite initial state
/// b_+ |1> (x) |Omega_0> + b_- |-1> (x) |Omega_lambda>.
template <typename Scalar>
struct InitState {
    std::complex<Scalar> b_plus{};
    std::complex<Scalar> b_minus{};
    Scalar lambda{0};   // 0: product state, 1: strongest correlation in the family
    Scalar epsilon{0};  // qubit energy splitting, units of omega_c

    /// Real positive amplitudes with |b_+|^2 = p_plus.
    static InitState from_population(Scalar p_plus, Scalar lambda, Scalar epsilon) {
        return InitState{std::complex<Scalar>(std::sqrt(p_plus)), std::complex<Scalar>(std::sqrt(Scalar(1) - p_plus)),
                         lambda, epsilon};
    }

    void validate() const {
        auto fail = [](const std::string& what) { throw DomainError("InitState: " + what); };
        const Scalar norm = std::norm(b_plus) + std::norm(b_minus);
        if (!(std::abs(norm - Scalar(1)) <= Scalar(1e-12))) {
            fail("|b_+|^2 + |b_-|^2 = 1 violated (sum = " + std::to_string(double(norm)) + ")");
        }
        if (b_plus == std::complex<Scalar>{} || b_minus == std::complex<Scalar>{}) {
            fail("b_+ and b_- must both be non-zero");
        }
        if (!(lambda >= 0 && lambda <= 1)) {
            fail("lambda in [0, 1] violated (lambda = " + std::to_string(double(lambda)) + ")");
        }
        if (!std::isfinite(epsilon)) fail("epsilon must be finite");
    }
};

using InitStated = InitState<double>;

/// 2x2 Hermitian unit-trace density matrix in the basis {|1>, |-1>}.
template <typename Scalar>
struct QubitState {
    Scalar p_plus{0};                 // population of |1>
    std::complex<Scalar> coherence{};  // element (|1>, |-1>)

    Scalar p_minus() const { return Scalar(1) - p_plus; }

    Matrix2c<Scalar> matrix() const {
        Matrix2c<Scalar> rho;
        rho << std::complex<Scalar>(p_plus), coherence, std::conj(coherence), std::complex<Scalar>(p_minus());
        return rho;
    }

    /// Populations in [0, 1] and |c|^2 <= p (1 - p) up to `slack`.
    bool is_physical(Scalar slack = Scalar(1e-12)) const {
        return p_plus >= -slack && p_plus <= Scalar(1) + slack &&
               std::norm(coherence) <= p_plus * p_minus() + slack;
    }
};

using QubitStated = QubitState<double>;

template <typename Scalar>
struct DecoherenceFactor {
    std::complex<Scalar> value{};
    Scalar lambda{0};
    Scalar t{0};
};

using DecoherenceFactord = DecoherenceFactor<double>;

/// C_lambda = sqrt((1-lambda)^2 + lambda^2 + 2 lambda (1-lambda) <Omega_0|Omega_f>).
template <typename Scalar>
Scalar normalization_c(const EnvSpec<Scalar>& env, Scalar lambda) {
    if (!(lambda >= 0 && lambda <= 1)) {
        throw DomainError("normalization_c: lambda in [0, 1] violated");
    }
    const Scalar overlap = vacuum_overlap(env);
    const Scalar rest = Scalar(1) - lambda;
    return std::sqrt(rest * rest + lambda * lambda + Scalar(2) * lambda * rest * overlap);
}

/// A_lambda(t) = C^-1 exp(-2i eps t - r) [1 - lambda + lambda exp(-2i phi + s)],
/// from kernels already evaluated at `k.t`.
template <typename Scalar>
DecoherenceFactor<Scalar> decoherence_factor(const EnvSpec<Scalar>& env, const InitState<Scalar>& init,
                                             const DephasingKernels<Scalar>& k) {
    using C = std::complex<Scalar>;
    const Scalar lambda = init.lambda;
    const Scalar norm = normalization_c(env, lambda);
    const C carrier = std::exp(C(-k.r, Scalar(-2) * init.epsilon * k.t));
    const C bracket = C(Scalar(1) - lambda) + lambda * std::exp(C(k.s, Scalar(-2) * k.phi));
    return DecoherenceFactor<Scalar>{carrier * bracket / norm, lambda, k.t};
}

template <typename Scalar>
DecoherenceFactor<Scalar> decoherence_factor(const EnvSpec<Scalar>& env, const InitState<Scalar>& init, Scalar t) {
    init.validate();
    return decoherence_factor(env, init, kernels_at(env, t));
}

/// Product-state channel: populations fixed, coherence multiplied by A_0(t).
template <typename Scalar>
QubitState<Scalar> evolve_product(const EnvSpec<Scalar>& env, Scalar epsilon, const QubitState<Scalar>& rho0,
                                  const DephasingKernels<Scalar>& k) {
    const InitState<Scalar> bare{std::complex<Scalar>(1), std::complex<Scalar>(0), Scalar(0), epsilon};
    return QubitState<Scalar>{rho0.p_plus, rho0.coherence * decoherence_factor(env, bare, k).value};
}

template <typename Scalar>
QubitState<Scalar> evolve_product(const EnvSpec<Scalar>& env, Scalar epsilon, const QubitState<Scalar>& rho0,
                                  Scalar t) {
    return evolve_product(env, epsilon, rho0, kernels_at(env, t));
}

/// Reduced state rho_lambda(t) of the correlated start.
template <typename Scalar>
QubitState<Scalar> rho_correlated(const EnvSpec<Scalar>& env, const InitState<Scalar>& init,
                                  const DephasingKernels<Scalar>& k) {
    const auto a = decoherence_factor(env, init, k).value;
    return QubitState<Scalar>{std::norm(init.b_plus), init.b_plus * std::conj(init.b_minus) * a};
}

template <typename Scalar>
QubitState<Scalar> rho_correlated(const EnvSpec<Scalar>& env, const InitState<Scalar>& init, Scalar t) {
    init.validate();
    return rho_correlated(env, init, kernels_at(env, t));
}

/// Reduced state rho_p(t) of the product start rho_lambda(0) (x) |Omega_0><Omega_0|;
/// `initial` are the kernels at t = 0.
template <typename Scalar>
QubitState<Scalar> rho_product(const EnvSpec<Scalar>& env, const InitState<Scalar>& init,
                               const DephasingKernels<Scalar>& initial, const DephasingKernels<Scalar>& k) {
    return evolve_product(env, init.epsilon, rho_correlated(env, init, initial), k);
}

template <typename Scalar>
QubitState<Scalar> rho_product(const EnvSpec<Scalar>& env, const InitState<Scalar>& init, Scalar t) {
    init.validate();
    return rho_product(env, init, kernels_at(env, Scalar(0)), kernels_at(env, t));
}

}  // namespace dephasing
