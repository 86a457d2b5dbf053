#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dephasing/experiments.hpp"

using namespace dephasing;

namespace {

EnvSpecd reference() { return EnvSpecd::dimensionless(0.01, 0.01, 0.05, 0.2); }

InitStated half(double lambda) { return InitStated::from_population(0.5, lambda, 1.0); }

const std::vector<double> kLambdas{0.25, 0.5, 0.75, 1.0};

}  // namespace

TEST_CASE("grids") {
    SUBCASE("geometric") {
        const auto g = geometric_grid(1e-2, 2.0, 1.0, true);
        REQUIRE(g.size() == 8);
        CHECK(g[0] == 0.0);
        CHECK(g[1] == 1e-2);
        CHECK(g[7] == doctest::Approx(0.64));
        CHECK(geometric_grid(1e-2, 1.05, 1e3).back() <= 1e3 * (1 + 1e-12));
        CHECK(geometric_grid(1e-2, 1.05, 1e3).size() == 236);
        CHECK_THROWS_AS(geometric_grid(0.0, 2.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(geometric_grid(1.0, 1.0, 2.0), std::invalid_argument);
    }
    SUBCASE("linear and log hit both ends exactly") {
        const auto lin = linear_grid(0.5, 4.0, 141);
        CHECK(lin.front() == 0.5);
        CHECK(lin.back() == 4.0);
        CHECK(lin[1] == doctest::Approx(0.525));
        const auto lg = log_grid(1e-4, 10.0, 121);
        CHECK(lg.front() == 1e-4);
        CHECK(lg.back() == 10.0);
        CHECK(lg[24] == doctest::Approx(1e-3));
        CHECK_THROWS_AS(linear_grid(1.0, 1.0, 5), std::invalid_argument);
        CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), std::invalid_argument);
    }
}

TEST_CASE("trajectory rows") {
    const auto grid = geometric_grid(1e-2, 1.05, 1e3, true);
    SUBCASE("lambda = 0 gives a zero distance column") {
        const auto table = trajectory(reference(), half(0.0), grid);
        REQUIRE(table.rows.size() == grid.size());
        for (const auto& row : table.rows) {
            CHECK(row.distance <= 1e-14);
            CHECK(row.entropy_correlated == doctest::Approx(row.entropy_product).epsilon(1e-14));
        }
    }
    SUBCASE("rows are in grid order and physical") {
        const auto table = trajectory(reference(), half(1.0), grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(table.rows[i].t == grid[i]);
            CHECK_NOTHROW(check_row(table.rows[i]));
        }
        CHECK(table.rows.front().distance == 0.0);
    }
    SUBCASE("matches distance_at") {
        const auto table = trajectory(reference(), half(0.75), grid);
        for (std::size_t i = 0; i < grid.size(); i += 17) {
            CHECK(table.rows[i].distance == distance_at(reference(), half(0.75), grid[i]));
        }
    }
    SUBCASE("rejects bad grids") {
        const std::vector<double> unsorted{0.0, 2.0, 1.0};
        const std::vector<double> negative{-1.0, 1.0};
        CHECK_THROWS_AS(trajectory(reference(), half(1.0), unsorted), std::invalid_argument);
        CHECK_THROWS_AS(trajectory(reference(), half(1.0), negative), std::invalid_argument);
    }
}

TEST_CASE("check_row names the broken bound") {
    TrajectoryRow row;
    row.distance = 1.1;
    CHECK_THROWS_WITH(check_row(row), doctest::Contains("D_T"));
    row.distance = 0.1;
    row.entropy_product = 0.6;
    CHECK_THROWS_WITH(check_row(row), doctest::Contains("S_L"));
    row.entropy_product = 0.1;
    row.abs_a_correlated = 1.01;
    CHECK_THROWS_WITH(check_row(row), doctest::Contains("|A|"));
}

TEST_CASE("reference set: distance grows in t and in lambda on [0, 1e3]") {
    const auto grid = geometric_grid(1e-2, 1.05, 1e3, true);
    std::vector<TrajectoryTable> tables;
    for (double lambda : kLambdas) tables.push_back(trajectory(reference(), half(lambda), grid));
    for (const auto& table : tables) {
        for (std::size_t i = 1; i < grid.size(); ++i) {
            CHECK(table.rows[i].distance >= table.rows[i - 1].distance - 1e-10);
        }
    }
    for (std::size_t k = 1; k < tables.size(); ++k) {
        for (std::size_t i = 1; i < grid.size(); ++i) {
            CHECK(tables[k].rows[i].distance >= tables[k - 1].rows[i].distance);
        }
    }
}

TEST_CASE("reference set: product start carries more entropy, more so for larger lambda") {
    const auto grid = geometric_grid(1e-2, 1.05, 1e3, true);
    double previous_gap = 0.0;
    for (double lambda : kLambdas) {
        for (const auto& row : trajectory(reference(), half(lambda), grid).rows) {
            CHECK(row.entropy_product - row.entropy_correlated >= -1e-12);
        }
        const double gap = entropy_gap_limit(reference(), half(lambda));
        CHECK(gap > previous_gap);
        previous_gap = gap;
    }
    CHECK(entropy_gap_limit(reference(), half(0.0)) == doctest::Approx(0.0));
}

TEST_CASE("entropy_gap_limit matches late trajectory values where they converge") {
    const auto env = EnvSpecd::dimensionless(0.01, 2.0, 0.05, 0.2);
    const auto row = trajectory(env, half(1.0), std::vector<double>{1e6}).rows.front();
    CHECK(row.entropy_product - row.entropy_correlated ==
          doctest::Approx(entropy_gap_limit(env, half(1.0))).epsilon(1e-6));
}

TEST_CASE("distance_limit") {
    CHECK(distance_limit(reference(), half(0.0)) == 0.0);
    auto free = reference();
    free.alpha = 0.0;
    CHECK(distance_limit(free, half(1.0)) == 0.0);
    CHECK_THROWS_AS(distance_limit(EnvSpecd::dimensionless(0.01, -0.5, 0.05, 0.2), half(1.0)), DomainError);

    SUBCASE("agrees with large-t evaluation when the approach is fast") {
        for (double mu : {1.0, 2.0, 3.0}) {
            const auto env = EnvSpecd::dimensionless(0.01, mu, 0.05, 0.2);
            CHECK(distance_at(env, half(1.0), 1e7) == doctest::Approx(distance_limit(env, half(1.0))).epsilon(1e-3));
        }
    }
    SUBCASE("vanishes like sqrt(alpha) at weak coupling") {
        auto at = [](double a) {
            return distance_limit(EnvSpecd::dimensionless(a, 0.01, 0.05, 0.2), half(1.0)) / std::sqrt(a);
        };
        CHECK(at(1e-10) == doctest::Approx(at(1e-12)).epsilon(1e-4));
    }
}

TEST_CASE("sweeps at the reference set") {
    const auto base = reference();
    SUBCASE("alpha: interior maximum") {
        const auto grid = log_grid(1e-4, 10.0, 121);
        const auto table = sweep(base, half(1.0), SweepParameter::alpha, grid);
        REQUIRE(table.rows.size() == grid.size());
        CHECK(table.fixed.count("alpha_dimless") == 0);
        CHECK(table.fixed.at("mu") == 0.01);
        const auto e = detect_extremum(table);
        CHECK(e.kind == ExtremumKind::max);
        CHECK(e.location > grid.front());
        CHECK(e.location < grid.back());
        CHECK(table.rows.back().distance < 1e-4);
    }
    SUBCASE("gamma: interior maximum") {
        const auto e = detect_extremum(sweep(base, half(1.0), SweepParameter::gamma, log_grid(1e-3, 2.0, 121)));
        CHECK(e.kind == ExtremumKind::max);
    }
    SUBCASE("mu: interior minimum with alpha*omega_c^mu held fixed") {
        for (double lambda : kLambdas) {
            const auto table = sweep(base, half(lambda), SweepParameter::mu, linear_grid(0.5, 4.0, 141));
            const auto e = detect_extremum(table);
            CHECK(e.kind == ExtremumKind::min);
            CHECK(e.location == doctest::Approx(3.09).epsilon(0.02));
        }
    }
    SUBCASE("mu sweep keeps the dimensionless coupling when omega_c != 1") {
        EnvSpecd scaled = base;
        scaled.omega_c = 3.0;
        scaled.alpha = 0.01 / std::pow(3.0, scaled.mu);
        scaled.gamma = 0.05 / std::pow(3.0, scaled.nu);
        const std::vector<double> grid{0.5, 1.0, 2.0};
        const auto a = sweep(base, half(1.0), SweepParameter::mu, grid);
        const auto b = sweep(scaled, half(1.0), SweepParameter::mu, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(b.rows[i].distance == doctest::Approx(a.rows[i].distance).epsilon(1e-12));
        }
    }
    SUBCASE("lambda: monotone, no extremum") {
        const auto table = sweep(base, half(1.0), SweepParameter::lambda, linear_grid(0.0, 1.0, 101));
        CHECK(table.rows.front().distance == 0.0);
        for (std::size_t i = 1; i < table.rows.size(); ++i) {
            CHECK(table.rows[i].distance > table.rows[i - 1].distance);
        }
        CHECK(detect_extremum(table).kind == ExtremumKind::none);
    }
    SUBCASE("at a finite time") {
        SweepOptions options;
        options.at_time = 10.0;
        const std::vector<double> grid{0.01, 0.1};
        const auto table = sweep(base, half(1.0), SweepParameter::alpha, grid, options);
        CHECK(table.rows[0].distance == distance_at(base, half(1.0), 10.0));
        CHECK(table.fixed.at("at_time") == 10.0);
    }
}

TEST_CASE("detect_extremum") {
    SweepTable t;
    CHECK(detect_extremum(t).kind == ExtremumKind::none);
    t.rows = {{0, 0}, {1, 5}, {2, 0}};
    auto e = detect_extremum(t);
    CHECK(e.kind == ExtremumKind::max);
    CHECK(e.location == 1.0);
    CHECK(e.value == 5.0);

    t.rows = {{0, 3}, {1, 1}, {2, 2}};
    e = detect_extremum(t);
    CHECK(e.kind == ExtremumKind::min);
    CHECK(e.location == 1.0);

    t.rows = {{0, 1}, {1, 2}, {2, 3}};
    CHECK(detect_extremum(t).kind == ExtremumKind::none);

    t.rows = {{0, 1}, {1, 4}, {2, 4}, {3, 1}};
    CHECK(detect_extremum(t).location == 1.0);

    // Interior max equal to an endpoint is not strict.
    t.rows = {{0, 4}, {1, 4}, {2, 1}};
    CHECK(detect_extremum(t).kind == ExtremumKind::none);

    CHECK(to_string(ExtremumKind::min) == "min");
    CHECK(parse_sweep_parameter("gamma") == SweepParameter::gamma);
    CHECK_FALSE(parse_sweep_parameter("nu").has_value());
}

TEST_CASE("saturation_time") {
    CHECK_THROWS_AS(saturation_time(reference(), half(1.0), 0.0), std::invalid_argument);
    SUBCASE("converging case") {
        const auto env = EnvSpecd::dimensionless(0.01, 2.0, 0.05, 0.2);
        const auto t = saturation_time(env, half(1.0), 1e-2);
        REQUIRE(t.has_value());
        CHECK(*t > 0.0);
        const double limit = distance_limit(env, half(1.0));
        CHECK(std::abs(distance_at(env, half(1.0), *t) - limit) <= 1e-2 * limit);
        CHECK(std::abs(distance_at(env, half(1.0), *t / 2) - limit) > 1e-2 * limit);
    }
    SUBCASE("mu = 0.01 approaches its limit too slowly") {
        CHECK_FALSE(saturation_time(reference(), half(1.0), 1e-2).has_value());
    }
}
