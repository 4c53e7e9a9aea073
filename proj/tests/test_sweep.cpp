#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "collapsim/sweep.hpp"

using namespace collapsim;

namespace {

SweepGrid small_grid() {
    SweepGrid g;
    g.n_axis = {1.0, 1e4, 9};
    g.lambda_axis = {1e-12, 1.0, 13};
    return g;
}

} // namespace

TEST_CASE("log axis spacing") {
    LogAxis ax{1.0, 1e4, 5};
    auto v = ax.values();
    REQUIRE(v.size() == 5);
    CHECK(v.front() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v[2] == doctest::Approx(1e2).epsilon(1e-12));
    CHECK(v.back() == doctest::Approx(1e4).epsilon(1e-12));
    CHECK_THROWS_AS((LogAxis{1.0, 1.0, 5}.validate("x")), std::invalid_argument);
    CHECK_THROWS_AS((LogAxis{0.0, 1.0, 5}.validate("x")), std::invalid_argument);
    CHECK_THROWS_AS((LogAxis{1.0, 2.0, 1}.validate("x")), std::invalid_argument);
}

TEST_CASE("grid shape and cell indexing") {
    GridResult res = run_sweep(small_grid(), CollapseParams::conventional(), 1);
    CHECK(res.n_values.size() == 9);
    CHECK(res.lambda_values.size() == 13);
    REQUIRE(res.cells.size() == 9 * 13);
    const GridCell& c = res.at(3, 7);
    CHECK(c.n == doctest::Approx(res.n_values[3]).epsilon(1e-12));
    CHECK(c.lambda_csl == doctest::Approx(res.lambda_values[7]).epsilon(1e-12));
    for (const auto& cell : res.cells) {
        CHECK_FALSE(cell.flagged);
        CHECK(cell.sigma_a > 0.0);
        CHECK_FALSE(cell.sigma_b.has_value()); // no model B requested
    }
}

TEST_CASE("weak-coupling corner reproduces free spreading") {
    GridResult res = run_sweep(small_grid(), CollapseParams::conventional(), 1);
    // n = 1, lambda = 1e-12: collapse is negligible at t = 1e-2 s.
    CHECK(res.at(0, 0).sigma_a == doctest::Approx(6.2966e-4).epsilon(1e-3));
    // Strong-coupling, large-n corner is well below the free value.
    CHECK(res.at(8, 12).sigma_a < 1e-6);
}

TEST_CASE("spread is nonincreasing along the lambda axis") {
    GridResult res = run_sweep(small_grid(), CollapseParams::conventional(), 2);
    for (std::size_t i = 0; i < res.n_values.size(); ++i)
        for (std::size_t j = 1; j < res.lambda_values.size(); ++j)
            CHECK(res.at(i, j).sigma_a <= res.at(i, j - 1).sigma_a * (1.0 + 1e-9));
}

TEST_CASE("threshold contour is present and nonincreasing in n") {
    SweepGrid g;
    g.n_axis = {1.0, 1e8, 33};
    g.lambda_axis = {1e-20, 1.0, 41};
    GridResult res = run_sweep(g, CollapseParams::conventional(), 0);
    REQUIRE(res.threshold_contour.size() > 10);
    double step = std::pow(g.lambda_axis.max / g.lambda_axis.min,
                           1.0 / double(g.lambda_axis.points - 1));
    for (std::size_t k = 1; k < res.threshold_contour.size(); ++k) {
        CHECK(res.threshold_contour[k].n > res.threshold_contour[k - 1].n);
        // Heavier systems need weaker coupling; allow one grid step of slack.
        CHECK(res.threshold_contour[k].lambda_csl <=
              res.threshold_contour[k - 1].lambda_csl * step);
    }
    // The contour sits where the spread actually crosses sigma0 / 2.
    for (const auto& p : res.threshold_contour) {
        SweepGrid probe = g;
        probe.n_axis = {p.n, p.n * 1.0001, 2};
        probe.lambda_axis = {p.lambda_csl, p.lambda_csl * 1.0001, 2};
        GridResult r2 = run_sweep(probe, CollapseParams::conventional(), 1);
        CHECK(r2.at(0, 0).sigma_a == doctest::Approx(g.sigma0 / 2.0).epsilon(0.05));
    }
}

TEST_CASE("difference columns appear with a second model") {
    SweepGrid g = small_grid();
    g.model_b = FiniteTemperature{2.73};
    GridResult res = run_sweep(g, CollapseParams::conventional(), 2);
    for (const auto& c : res.cells) {
        REQUIRE(c.sigma_b.has_value());
        REQUIRE(c.diff_abs.has_value());
        REQUIRE(c.diff_rel.has_value());
        CHECK(*c.diff_abs == doctest::Approx(std::abs(c.sigma_a - *c.sigma_b)).epsilon(1e-12));
        CHECK(*c.diff_rel == doctest::Approx(*c.diff_abs / c.sigma_a).epsilon(1e-12));
    }
}

TEST_CASE("output is byte-identical across thread counts and repeat runs") {
    SweepGrid g = small_grid();
    g.model_b = Colored{1e8};
    CollapseParams p = CollapseParams::conventional();
    std::string csv1 = grid_to_csv(run_sweep(g, p, 1));
    std::string csv8 = grid_to_csv(run_sweep(g, p, 8));
    std::string csv8b = grid_to_csv(run_sweep(g, p, 8));
    CHECK(csv1 == csv8);
    CHECK(csv8 == csv8b);
}

TEST_CASE("CSV schema") {
    SweepGrid g;
    g.n_axis = {1.0, 10.0, 2};
    g.lambda_axis = {1e-10, 1e-9, 2};
    GridResult res = run_sweep(g, CollapseParams::conventional(), 1);
    std::string csv = grid_to_csv(res);
    CHECK(csv.rfind("n,lambda_csl,sigma_a,sigma_b,diff_abs,diff_rel,flag\n", 0) == 0);
    // Header + 4 cells.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(csv.find("1.00000000e+00") != std::string::npos);

    std::string contour = contour_to_csv(res);
    CHECK(contour.rfind("n,lambda_csl\n", 0) == 0);

    std::string json = grid_to_json(res);
    CHECK(json.find("\"cells\"") != std::string::npos);
    CHECK(json.find("\"threshold_contour\"") != std::string::npos);
}

TEST_CASE("invalid grids are rejected") {
    SweepGrid g = small_grid();
    g.sigma0 = 0.0;
    CHECK_THROWS_AS(run_sweep(g, CollapseParams::conventional(), 1),
                    std::invalid_argument);
    g = small_grid();
    g.t = -1.0;
    CHECK_THROWS_AS(run_sweep(g, CollapseParams::conventional(), 1),
                    std::invalid_argument);
}
