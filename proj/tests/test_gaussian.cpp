#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "collapsim/constants.hpp"
#include "collapsim/gaussian.hpp"

using namespace collapsim;

namespace {

double free_spread(double sigma0, double mass, double t) {
    double x = kHbar * t / (2.0 * mass * sigma0 * sigma0);
    return sigma0 * std::sqrt(1.0 + x * x);
}

double rel(Cx a, Cx b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("state construction and spread round trip") {
    GaussianState s = GaussianState::from_spread(5e-7);
    CHECK(s.alpha.real() == doctest::Approx(1.0 / (4.0 * 25e-14)).epsilon(1e-14));
    CHECK(spread(s.alpha) == doctest::Approx(5e-7).epsilon(1e-14));
    CHECK_THROWS_AS(GaussianState::from_spread(0.0), std::domain_error);
    CHECK_THROWS_AS(spread(Cx(-1.0, 0.0)), InvalidStateError);
}

TEST_CASE("t = 0 is the identity map for every model") {
    GaussianState s = GaussianState::from_spread(3e-7);
    s.alpha += Cx(0.0, 1e11); // non-trivial phase curvature
    SystemSpec sys(1e3, QmuplCoupling(1e2));
    CHECK(rel(alpha_white(s, sys, 0.0), s.alpha) < 1e-12);
    CHECK(rel(alpha_finite_T(s, sys, 300.0, 0.0), s.alpha) < 1e-12);
    CHECK(rel(alpha_colored(s, sys, 1e6, 0.0), s.alpha) < 1e-15);
}

TEST_CASE("vanishing coupling limit reproduces free-particle spreading") {
    GaussianState s = GaussianState::from_spread(5e-7);
    SystemSpec sys(1.0, QmuplCoupling(1e-30)); // negligible coupling
    double t = 1e-2;
    double expected = free_spread(5e-7, kNucleonMass, t);
    CHECK(spread(alpha_white(s, sys, t)) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(expected == doctest::Approx(6.2966e-4).epsilon(1e-3));
    // Composite of n particles spreads with the total mass n m0.
    SystemSpec sys_n(100.0, QmuplCoupling(1e-30));
    CHECK(spread(alpha_white(s, sys_n, t)) ==
          doctest::Approx(free_spread(5e-7, 100.0 * kNucleonMass, t)).epsilon(1e-8));
}

TEST_CASE("model degeneracy chain: finite-T and colored pinch down to white") {
    GaussianState s = GaussianState::from_spread(5e-7);
    std::vector<SystemSpec> systems{SystemSpec(1.0, QmuplCoupling(1e-3)),
                                    SystemSpec(1e3, QmuplCoupling(1e2)),
                                    SystemSpec(1e2, QmuplCoupling(1e6))};
    for (const auto& sys : systems) {
        for (double t : {1e-4, 1e-2, 1.0}) {
            Cx w = alpha_white(s, sys, t);
            CHECK(rel(alpha_finite_T(s, sys, 1e12, t), w) < 1e-8);
            CHECK(std::abs(spread(alpha_colored(s, sys, 1e15, t)) - spread(w)) /
                      spread(w) <
                  1e-4);
        }
    }
}

TEST_CASE("finite temperature interpolates monotonically toward white") {
    GaussianState s = GaussianState::from_spread(5e-7);
    SystemSpec sys(1e3, QmuplCoupling(1e2));
    Cx w = alpha_white(s, sys, 1e-2);
    double prev = 1e300;
    for (double T : {1.0, 1e3, 1e6, 1e9, 1e12}) {
        double d = std::abs(alpha_finite_T(s, sys, T, 1e-2) - w);
        CHECK(d <= prev * (1.0 + 1e-12));
        prev = d;
    }
}

TEST_CASE("stronger coupling localizes: spread nonincreasing in lambda_q") {
    GaussianState s = GaussianState::from_spread(5e-7);
    double prev = 1e300;
    for (double lq = 1e-2; lq <= 1e8; lq *= 10.0) {
        double sig = spread(alpha_white(s, SystemSpec(1e2, QmuplCoupling(lq)), 1.0));
        CHECK(sig <= prev * (1.0 + 1e-12));
        prev = sig;
    }
}

TEST_CASE("closed forms satisfy their evolution equation (central difference)") {
    GaussianState s = GaussianState::from_spread(5e-7);
    const double n = 1e2, lq = 1e3, T = 300.0;
    SystemSpec sys(n, QmuplCoupling(lq));

    auto check_model = [&](auto alpha_of_t, Cx a) {
        Cx b = std::sqrt(std::norm(a) + Cx(0.0, 2.0 * lq * kNucleonMass * n * n / kHbar));
        for (double t : {1e-4, 1e-3, 1e-2}) {
            double h = t * 1e-5;
            Cx num = (alpha_of_t(t + h) - alpha_of_t(t - h)) / (2.0 * h);
            Cx al = alpha_of_t(t);
            Cx rhs = Cx(0.0, -kHbar / (2.0 * n * kNucleonMass)) *
                     (b * b + (2.0 * al + a) * (2.0 * al + a));
            CHECK(rel(num, rhs) < 1e-6);
        }
    };
    check_model([&](double t) { return alpha_white(s, sys, t); }, Cx(0.0, 0.0));
    check_model([&](double t) { return alpha_finite_T(s, sys, T, t); },
                Cx(0.0, -lq * kHbar * n / (2.0 * kBoltzmann * T)));
}

TEST_CASE("physicality: Re(alpha) stays positive over a broad parameter grid") {
    GaussianState s = GaussianState::from_spread(5e-7);
    for (double n = 1.0; n <= 1e8; n *= 1e2) {
        for (double lq = 1e-8; lq <= 1e8; lq *= 1e4) {
            SystemSpec sys(n, QmuplCoupling(lq));
            for (double t : {1e-6, 1e-3, 1.0}) {
                CHECK(alpha_white(s, sys, t).real() > 0.0);
                CHECK(alpha_finite_T(s, sys, 300.0, t).real() > 0.0);
                CHECK(alpha_colored(s, sys, 1e8, t).real() > 0.0);
            }
        }
    }
}

TEST_CASE("colored model is continuous in t near zero") {
    GaussianState s = GaussianState::from_spread(5e-7);
    SystemSpec sys(1e2, QmuplCoupling(1e2));
    Cx a0 = s.alpha;
    // alpha(t) -> alpha_0, and monotonically in |difference| on a short dyadic ladder.
    double prev = 1e300;
    for (double t = 1e-6; t >= 1e-10; t /= 10.0) {
        double d = std::abs(alpha_colored(s, sys, 1e6, t) - a0) / std::abs(a0);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 1e-5);
}

TEST_CASE("colored model is smooth in the cutoff") {
    GaussianState s = GaussianState::from_spread(5e-7);
    SystemSpec sys(1e3, QmuplCoupling(1e2));
    for (double g = 1e1; g <= 1e13; g *= 1e2) {
        Cx v1 = alpha_colored(s, sys, g, 1e-2);
        Cx v2 = alpha_colored(s, sys, g * (1.0 + 1e-8), 1e-2);
        CHECK(rel(v1, v2) < 1e-5);
    }
}

TEST_CASE("variant dispatch routes to the right closed form") {
    GaussianState s = GaussianState::from_spread(5e-7);
    SystemSpec sys(1e2, QmuplCoupling(1e2));
    CHECK(alpha_evolve(s, sys, White{}, 1e-2) == alpha_white(s, sys, 1e-2));
    CHECK(alpha_evolve(s, sys, FiniteTemperature{2.73}, 1e-2) ==
          alpha_finite_T(s, sys, 2.73, 1e-2));
    CHECK(alpha_evolve(s, sys, Colored{1e4}, 1e-2) == alpha_colored(s, sys, 1e4, 1e-2));
}

TEST_CASE("invalid inputs are rejected") {
    GaussianState s = GaussianState::from_spread(5e-7);
    SystemSpec sys(1.0, QmuplCoupling(1e2));
    CHECK_THROWS_AS(alpha_white(s, sys, -1.0), std::domain_error);
    CHECK_THROWS_AS(alpha_finite_T(s, sys, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(alpha_colored(s, sys, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(SystemSpec(0.0, QmuplCoupling(1e2)), std::domain_error);
    GaussianState bad = s;
    bad.alpha = Cx(-1.0, 0.0);
    CHECK_THROWS_AS(alpha_white(bad, sys, 1.0), InvalidStateError);
}

TEST_CASE("branch-point initial condition raises a diagnostic error") {
    // alpha_0 = -i b / 2 makes tanh(kappa) = 1 exactly.
    const double n = 1.0, lq = 1e2;
    Cx b = std::sqrt(Cx(0.0, 2.0 * lq * kNucleonMass * n * n / kHbar));
    GaussianState s;
    s.alpha = Cx(0.0, -0.5) * b; // Re = Im(b)/2 > 0, so it passes validation
    SystemSpec sys(n, QmuplCoupling(lq));
    CHECK_THROWS_AS(alpha_white(s, sys, 1e-2), SingularEvaluationError);
}
