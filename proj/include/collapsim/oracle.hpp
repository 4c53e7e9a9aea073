#pragma once

#include <string>
#include <vector>

#include "collapsim/gaussian.hpp"

namespace collapsim {

struct IntegrationFailure : std::runtime_error {
    double last_good_t;
    IntegrationFailure(const std::string& msg, double t)
        : std::runtime_error(msg), last_good_t(t) {}
};

// Complex Riccati problem
//   d alpha / dt = -(i hbar / (2 n m0)) [b^2 + (2 alpha + a)^2],
// the ODE the finite-temperature closed form satisfies (a = 0 for the
// white-noise model). Integrated independently of the closed forms so it
// can serve as their oracle.
struct RiccatiProblem {
    Cx a{0.0, 0.0};     // m^-2
    Cx b{0.0, 0.0};     // m^-2
    double n = 1.0;     // nucleon count
    Cx alpha0{0.0, 0.0}; // m^-2
    double t_end = 0.0; // s
    double rel_tol = 1e-9;

    static RiccatiProblem for_white(const GaussianState& state0, const SystemSpec& sys,
                                    double t_end, double rel_tol = 1e-9);
    static RiccatiProblem for_finite_T(const GaussianState& state0, const SystemSpec& sys,
                                       double T, double t_end, double rel_tol = 1e-9);
    void validate() const;
};

// alpha(t_end) by embedded adaptive Runge-Kutta (Dormand-Prince 5(4)).
Cx integrate_riccati(const RiccatiProblem& p);

// Grid over which the colored-noise model is checked against its
// white-noise limit.
struct LimitCheckGrid {
    std::vector<double> n_values;          // particle counts fed to SystemSpec
    std::vector<double> lambda_q_values;   // m^-2 s^-1
    double sigma0 = 5e-7;                  // m
    double t = 1e-2;                       // s
    std::vector<double> cutoffs = {1e12, 1e13, 1e14, 1e15}; // s^-1
};

struct LimitCheckReport {
    std::vector<double> cutoffs;
    std::vector<double> max_rel_deviation; // sup over grid, per cutoff
    bool monotone_decreasing = false;
    bool converged = false; // final deviation under the stated threshold
    double threshold = 1e-4;

    std::string to_json() const;
};

// Evaluates alpha_colored against alpha_white on the grid for each cutoff
// and reports the sup-norm spread deviation per cutoff. Non-convergence is
// reported, not thrown; an empty grid is a usage error.
LimitCheckReport limit_check_colored(const LimitCheckGrid& grid);

} // namespace collapsim
