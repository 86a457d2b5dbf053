// metrics.hpp - trace distance, purity and linear entropy of qubit states

#pragma once

#include <cmath>
#include <complex>

#include "dephasing/model.hpp"

namespace dephasing {

/// D_T = (1/2) Tr|rho1 - rho2|. The difference is traceless Hermitian with
/// eigenvalues +-sqrt(a^2 + |d|^2), a the population gap, d the coherence gap.
template <typename Scalar>
Scalar trace_distance(const QubitState<Scalar>& rho1, const QubitState<Scalar>& rho2) {
    const Scalar gap = rho1.p_plus - rho2.p_plus;
    return std::hypot(gap, std::abs(rho1.coherence - rho2.coherence));
}

/// Tr(rho^2).
template <typename Scalar>
Scalar purity(const QubitState<Scalar>& rho) {
    return rho.p_plus * rho.p_plus + rho.p_minus() * rho.p_minus() + Scalar(2) * std::norm(rho.coherence);
}

/// S_L = 1 - Tr(rho^2), in [0, 1/2] for a qubit.
template <typename Scalar>
Scalar linear_entropy(const QubitState<Scalar>& rho) {
    return Scalar(1) - purity(rho);
}

namespace detail {

// 1 - [|b_+|^4 + |b_-|^4 + 2 |b_+|^2 |b_-|^2 |A|^2]
template <typename Scalar>
Scalar entropy_from_factor(const InitState<Scalar>& init, Scalar abs_a) {
    const Scalar pp = std::norm(init.b_plus);
    const Scalar pm = std::norm(init.b_minus);
    return Scalar(1) - (pp * pp + pm * pm + Scalar(2) * pp * pm * abs_a * abs_a);
}

}  // namespace detail

/// Linear entropy of rho_lambda(t), written directly in terms of |A_lambda(t)|.
template <typename Scalar>
Scalar entropy_correlated(const EnvSpec<Scalar>& env, const InitState<Scalar>& init, Scalar t) {
    init.validate();
    return detail::entropy_from_factor(init, std::abs(decoherence_factor(env, init, t).value));
}

/// Linear entropy of rho_p(t), in terms of |A_lambda(0) A_0(t)|.
template <typename Scalar>
Scalar entropy_product(const EnvSpec<Scalar>& env, const InitState<Scalar>& init, Scalar t) {
    init.validate();
    InitState<Scalar> bare = init;
    bare.lambda = Scalar(0);
    const auto start = decoherence_factor(env, init, Scalar(0)).value;
    const auto decay = decoherence_factor(env, bare, t).value;
    return detail::entropy_from_factor(init, std::abs(start * decay));
}

}  // namespace dephasing
