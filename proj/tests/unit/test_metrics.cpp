#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dephasing/metrics.hpp"

using namespace dephasing;
using cd = std::complex<double>;

namespace {

// Uniform sample from the Bloch ball.
QubitStated random_state(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u;
    double x = n(rng), y = n(rng), z = n(rng);
    const double scale = std::cbrt(u(rng)) / std::sqrt(x * x + y * y + z * z);
    x *= scale, y *= scale, z *= scale;
    return QubitStated{0.5 * (1 + z), cd(0.5 * x, -0.5 * y)};
}

double eigen_trace_distance(const QubitStated& a, const QubitStated& b) {
    const Matrix2c<double> diff = a.matrix() - b.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix2c<double>> solver(diff);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace

TEST_CASE("trace_distance anchors") {
    const QubitStated up{1.0, cd(0)};
    const QubitStated down{0.0, cd(0)};
    const QubitStated plus{0.5, cd(0.5)};
    CHECK(trace_distance(plus, plus) == 0.0);
    CHECK(trace_distance(up, down) == 1.0);
    CHECK(trace_distance(plus, QubitStated{0.5, cd(-0.5)}) == 1.0);
    CHECK(trace_distance(QubitStated{0.5, cd(0.3, 0.1)}, QubitStated{0.5, cd(0.1, -0.2)}) ==
          doctest::Approx(std::abs(cd(0.2, 0.3))).epsilon(1e-15));
    CHECK(trace_distance(up, plus) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
}

TEST_CASE("trace_distance matches an eigen-decomposition") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 1000; ++i) {
        const auto a = random_state(rng);
        const auto b = random_state(rng);
        CHECK(trace_distance(a, b) == doctest::Approx(eigen_trace_distance(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("trace_distance is a metric on random states") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 1000; ++i) {
        const auto a = random_state(rng);
        const auto b = random_state(rng);
        const auto c = random_state(rng);
        const double ab = trace_distance(a, b);
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0 + 1e-15);
        CHECK(ab == trace_distance(b, a));
        CHECK(trace_distance(a, c) <= ab + trace_distance(b, c) + 1e-15);
    }
}

TEST_CASE("purity and linear_entropy anchors") {
    CHECK(linear_entropy(QubitStated{1.0, cd(0)}) == 0.0);
    CHECK(linear_entropy(QubitStated{0.5, cd(0.5)}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(linear_entropy(QubitStated{0.5, cd(0)}) == 0.5);
    CHECK(linear_entropy(QubitStated{0.75, cd(0)}) == 0.375);
    CHECK(purity(QubitStated{0.5, cd(0)}) == 0.5);
}

TEST_CASE("linear_entropy lies in [0, 1/2] and matches Tr(rho^2)") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 1000; ++i) {
        const auto rho = random_state(rng);
        const double s = linear_entropy(rho);
        CHECK(s >= -1e-15);
        CHECK(s <= 0.5 + 1e-15);
        const Matrix2c<double> m = rho.matrix();
        CHECK(s == doctest::Approx(1.0 - (m * m).trace().real()).epsilon(1e-13));
    }
}

namespace {

EnvSpecd weak_env(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> alpha(0.0, 0.1), mu(0.01, 3.0), gamma(0.0, 0.5), nu(0.1, 2.0);
    return EnvSpecd::dimensionless(alpha(rng), mu(rng), gamma(rng), nu(rng));
}

InitStated random_init(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> p(0.05, 0.95), unit(0.0, 1.0), phase(-std::numbers::pi, std::numbers::pi);
    const double pp = p(rng);
    return InitStated{std::polar(std::sqrt(pp), phase(rng)), std::polar(std::sqrt(1 - pp), phase(rng)), unit(rng),
                      1.0};
}

}  // namespace

TEST_CASE("closed-form entropies agree with the evolved states") {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 300; ++i) {
        const auto env = weak_env(rng);
        const auto init = random_init(rng);
        const double t = std::pow(10.0, std::uniform_real_distribution<double>(-2, 4)(rng));
        CHECK(entropy_correlated(env, init, t) ==
              doctest::Approx(linear_entropy(rho_correlated(env, init, t))).epsilon(1e-12));
        CHECK(entropy_product(env, init, t) ==
              doctest::Approx(linear_entropy(rho_product(env, init, t))).epsilon(1e-12));
    }
}

TEST_CASE("correlated start never has more entropy at weak coupling") {
    std::mt19937_64 rng(25);
    for (int i = 0; i < 500; ++i) {
        const auto env = weak_env(rng);
        const auto init = random_init(rng);
        const double t = std::pow(10.0, std::uniform_real_distribution<double>(-2, 4)(rng));
        CHECK(entropy_correlated(env, init, t) <= entropy_product(env, init, t) + 1e-12);
    }
}

TEST_CASE("both reduced evolutions are trace-distance contractive") {
    std::mt19937_64 rng(26);
    for (int i = 0; i < 300; ++i) {
        const auto env = weak_env(rng);
        const double t = std::pow(10.0, std::uniform_real_distribution<double>(-2, 4)(rng));
        const auto a = random_state(rng);
        const auto b = random_state(rng);
        const double before = trace_distance(a, b);
        CHECK(trace_distance(evolve_product(env, 1.0, a, t), evolve_product(env, 1.0, b, t)) <= before + 1e-12);

    }
}

TEST_CASE("correlated starts rescale coherence gaps by |A(t)/A(0)|, which may exceed 1") {
    std::mt19937_64 rng(27);
    for (int i = 0; i < 300; ++i) {
        const auto env = weak_env(rng);
        const double t = std::pow(10.0, std::uniform_real_distribution<double>(-2, 4)(rng));
        auto ia = random_init(rng);
        auto ib = random_init(rng);
        ib.lambda = ia.lambda;
        const auto a0 = rho_correlated(env, ia, 0.0);
        const auto b0 = rho_correlated(env, ib, 0.0);
        const double gain = std::abs(decoherence_factor(env, ia, t).value / decoherence_factor(env, ia, 0.0).value);
        const double expected = std::hypot(a0.p_plus - b0.p_plus, gain * std::abs(a0.coherence - b0.coherence));
        CHECK(trace_distance(rho_correlated(env, ia, t), rho_correlated(env, ib, t)) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}
