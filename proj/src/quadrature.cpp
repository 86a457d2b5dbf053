#include "dephasing/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

namespace dephasing {

namespace {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (QUADPACK qk15).
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
// Gauss weights for kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    bool transformed;  // integrand expressed in v with x = a v^q
};

struct WorstFirst {
    bool operator()(const Segment& a, const Segment& b) const { return a.error < b.error; }
};

// Integrand in the scaled variable x = w / omega_c, without the prefactor
// weight * omega_c^exponent.
class ScaledIntegrand {
public:
    ScaledIntegrand(double exponent, Oscillation osc, double tau, double a, int q)
        : e_(exponent), osc_(osc), tau_(tau), a_(a), q_(q) {}

    double plain(double x) const { return std::pow(x, e_ - 1.0) * std::exp(-x) * oscillation(x); }

    // First-panel form: x = a v^q, dx = q a v^(q-1) dv.
    double transformed(double v) const {
        const double x = a_ * std::pow(v, q_);
        return q_ * std::pow(a_, e_) * std::pow(v, q_ * e_ - 1.0) * std::exp(-x) * oscillation(x);
    }

private:
    double oscillation(double x) const {
        switch (osc_) {
            case Oscillation::none:
                return 1.0;
            case Oscillation::one_minus_cos: {
                const double h = std::sin(x * tau_ / 2.0);
                return 2.0 * h * h;
            }
            case Oscillation::sine:
                return std::sin(x * tau_);
        }
        return 0.0;
    }

    double e_;
    Oscillation osc_;
    double tau_;
    double a_;
    int q_;
};

template <typename F>
Segment gauss_kronrod(const F& f, double lo, double hi, bool transformed) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * pair;
        }
    }
    kronrod *= half;
    gauss *= half;
    return Segment{lo, hi, kronrod, std::abs(kronrod - gauss), transformed};
}

double effective_exponent(double exponent, Oscillation osc) {
    switch (osc) {
        case Oscillation::none:
            return exponent;
        case Oscillation::one_minus_cos:
            return exponent + 2.0;
        case Oscillation::sine:
            return exponent + 1.0;
    }
    return exponent;
}

// Bound on int_X^inf x^(e-1) exp(-x) dx, valid for X > e - 1.
double tail_bound(double exponent, double upper) {
    const double shift = std::max(0.0, exponent - 1.0);
    return std::pow(upper, exponent - 1.0) * std::exp(-upper) / (1.0 - shift / upper);
}

}  // namespace

void QuadSpec::validate() const {
    if (!(rel_tol > 0)) throw std::invalid_argument("QuadSpec: rel_tol > 0 violated");
    if (!(abs_tol > 0)) throw std::invalid_argument("QuadSpec: abs_tol > 0 violated");
    if (max_subdivisions < 1) throw std::invalid_argument("QuadSpec: max_subdivisions >= 1 violated");
}

QuadResult integrate_spectral(double weight, double exponent, Oscillation osc, double t,
                              double omega_c, const QuadSpec& q) {
    q.validate();
    if (!(t >= 0)) throw DomainError("integrate_spectral: time must be >= 0");
    if (!(omega_c > 0)) throw DomainError("integrate_spectral: omega_c > 0 violated");
    const double e_eff = effective_exponent(exponent, osc);
    if (!(e_eff > 0)) {
        throw DomainError("integrate_spectral: integrand is not integrable at w = 0");
    }
    if (weight == 0.0 || (t == 0.0 && osc != Oscillation::none)) {
        return QuadResult{};
    }

    const double prefactor = weight * std::pow(omega_c, exponent);
    const double tau = omega_c * t;
    const double osc_bound = (osc == Oscillation::one_minus_cos) ? 2.0 : 1.0;

    // Practical upper limit: grow until the analytic tail is negligible
    // against the absolute tolerance.
    double upper = std::max(10.0 + 2.0 * std::log(1.0 / q.abs_tol), 2.0 * (exponent + 1.0));
    double tail = std::abs(prefactor) * osc_bound * tail_bound(exponent, upper);
    while (tail > 1e-3 * q.abs_tol && upper < 2000.0) {
        upper += 10.0;
        tail = std::abs(prefactor) * osc_bound * tail_bound(exponent, upper);
    }

    const double panel = (tau > 0) ? std::min(1.0, std::numbers::pi / tau) : 1.0;
    const double first = std::min(panel, upper);
    const int power = std::max(1, static_cast<int>(std::ceil(3.0 / e_eff)));
    const ScaledIntegrand integrand(exponent, osc, tau, first, power);
    const auto plain = [&](double x) { return integrand.plain(x); };
    const auto transformed = [&](double v) { return integrand.transformed(v); };
    const auto evaluate = [&](double lo, double hi, bool tr) {
        return tr ? gauss_kronrod(transformed, lo, hi, true) : gauss_kronrod(plain, lo, hi, false);
    };

    std::vector<Segment> initial;
    initial.push_back(evaluate(0.0, 1.0, true));
    const auto panels = static_cast<std::size_t>(std::ceil((upper - first) / panel));
    for (std::size_t k = 0; k < panels; ++k) {
        const double lo = first + static_cast<double>(k) * panel;
        const double hi = std::min(upper, lo + panel);
        if (hi > lo) initial.push_back(evaluate(lo, hi, false));
    }
    std::priority_queue<Segment, std::vector<Segment>, WorstFirst> heap(WorstFirst{}, std::move(initial));

    double value = 0.0;
    double error = 0.0;
    auto totals = [&] {
        value = 0.0;
        error = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
    };

    int subdivisions = 0;
    totals();
    while (true) {
        const double total_error = std::abs(prefactor) * error + tail;
        const double scaled = prefactor * value;
        if (total_error <= std::max(q.abs_tol, q.rel_tol * std::abs(scaled))) {
            return QuadResult{scaled, total_error, subdivisions};
        }
        if (subdivisions >= q.max_subdivisions) {
            throw ConvergenceError("integrate_spectral: no convergence after " +
                                       std::to_string(subdivisions) + " subdivisions (error estimate " +
                                       std::to_string(total_error) + ")",
                                   scaled, total_error);
        }
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Segment left = evaluate(worst.lo, mid, worst.transformed);
        const Segment right = evaluate(mid, worst.hi, worst.transformed);
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        if (subdivisions % 64 == 0) totals();  // re-sum, incremental updates drift
    }
}

QuadResult integrate_r(const EnvSpecd& env, double t, const QuadSpec& q) {
    env.validate();
    return integrate_spectral(4.0 * env.alpha, env.mu, Oscillation::one_minus_cos, t, env.omega_c, q);
}

QuadResult integrate_s(const EnvSpecd& env, double t, const QuadSpec& q) {
    env.validate();
    const double cross = std::sqrt(env.alpha * env.gamma);
    const QuadResult growth =
        integrate_spectral(2.0 * cross, env.kappa(), Oscillation::one_minus_cos, t, env.omega_c, q);
    const QuadResult norm = integrate_spectral(0.5 * env.gamma, env.nu, Oscillation::none, 0.0, env.omega_c, q);
    return QuadResult{growth.value - norm.value, growth.abs_error + norm.abs_error,
                      growth.subdivisions + norm.subdivisions};
}

QuadResult integrate_phi(const EnvSpecd& env, double t, const QuadSpec& q) {
    env.validate();
    const double cross = std::sqrt(env.alpha * env.gamma);
    return integrate_spectral(cross, env.kappa(), Oscillation::sine, t, env.omega_c, q);
}

}  // namespace dephasing
