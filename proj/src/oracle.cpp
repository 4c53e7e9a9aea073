#include "collapsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace collapsim {

RiccatiProblem RiccatiProblem::for_white(const GaussianState& state0, const SystemSpec& sys,
                                         double t_end, double rel_tol) {
    RiccatiProblem p;
    p.a = Cx(0.0, 0.0);
    p.b = std::sqrt(Cx(0.0, 2.0 * sys.coupling.lambda_q * kNucleonMass * sys.n * sys.n / kHbar));
    p.n = sys.n;
    p.alpha0 = state0.alpha;
    p.t_end = t_end;
    p.rel_tol = rel_tol;
    return p;
}

RiccatiProblem RiccatiProblem::for_finite_T(const GaussianState& state0, const SystemSpec& sys,
                                            double T, double t_end, double rel_tol) {
    RiccatiProblem p;
    p.a = Cx(0.0, -sys.coupling.lambda_q * kHbar * sys.n / (2.0 * kBoltzmann * T));
    p.b = std::sqrt(std::norm(p.a) +
                    Cx(0.0, 2.0 * sys.coupling.lambda_q * kNucleonMass * sys.n * sys.n / kHbar));
    p.n = sys.n;
    p.alpha0 = state0.alpha;
    p.t_end = t_end;
    p.rel_tol = rel_tol;
    return p;
}

void RiccatiProblem::validate() const {
    if (!(t_end >= 0.0)) throw std::domain_error("RiccatiProblem: t_end must be >= 0");
    if (!(rel_tol > 0.0) || !(rel_tol <= 1e-3))
        throw std::domain_error("RiccatiProblem: rel_tol must be in (0, 1e-3]");
    if (!(n > 0.0)) throw std::domain_error("RiccatiProblem: n must be > 0");
}

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

} // namespace

Cx integrate_riccati(const RiccatiProblem& p) {
    p.validate();
    if (p.t_end == 0.0) return p.alpha0;

    const Cx pref = Cx(0.0, -kHbar / (2.0 * p.n * kNucleonMass));
    const Cx b2 = p.b * p.b;
    auto f = [&](Cx alpha) {
        Cx s = 2.0 * alpha + p.a;
        return pref * (b2 + s * s);
    };

    double t = 0.0;
    Cx y = p.alpha0;
    // Initial step from the local derivative scale.
    double scale0 = std::max(std::abs(y), 1e-300);
    double h = std::min(p.t_end, 0.01 * scale0 / std::max(std::abs(f(y)), 1e-300));
    h = std::min(h, p.t_end);

    const double hmin = p.t_end * 1e-15;
    int rejects_in_a_row = 0;
    while (t < p.t_end) {
        if (h < hmin)
            throw IntegrationFailure("integrate_riccati: step size underflow (stiff blow-up)", t);
        if (t + h > p.t_end) h = p.t_end - t;

        Cx k1 = f(y);
        Cx k2 = f(y + h * (a21 * k1));
        Cx k3 = f(y + h * (a31 * k1 + a32 * k2));
        Cx k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        Cx k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        Cx k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        Cx y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        Cx k7 = f(y5);
        Cx err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double scale = std::max({std::abs(y), std::abs(y5), 1e-300});
        double rel_err = std::abs(err) / scale;
        if (rel_err <= p.rel_tol || !std::isfinite(rel_err)) {
            if (!std::isfinite(rel_err))
                throw IntegrationFailure("integrate_riccati: non-finite state", t);
            t += h;
            y = y5;
            rejects_in_a_row = 0;
        } else {
            ++rejects_in_a_row;
            if (rejects_in_a_row > 200)
                throw IntegrationFailure("integrate_riccati: repeated step rejection", t);
        }
        double grow = 0.9 * std::pow(p.rel_tol / std::max(rel_err, 1e-300), 0.2);
        h *= std::clamp(grow, 0.2, 5.0);
    }
    return y;
}

LimitCheckReport limit_check_colored(const LimitCheckGrid& grid) {
    if (grid.n_values.empty() || grid.lambda_q_values.empty() || grid.cutoffs.empty())
        throw std::invalid_argument("limit_check_colored: empty grid");

    LimitCheckReport rep;
    rep.cutoffs = grid.cutoffs;
    std::sort(rep.cutoffs.begin(), rep.cutoffs.end());
    GaussianState s0 = GaussianState::from_spread(grid.sigma0);

    for (double g : rep.cutoffs) {
        double worst = 0.0;
        for (double n : grid.n_values) {
            for (double lq : grid.lambda_q_values) {
                SystemSpec sys(n, QmuplCoupling(lq));
                double sw = spread(alpha_white(s0, sys, grid.t));
                double sc = spread(alpha_colored(s0, sys, g, grid.t));
                worst = std::max(worst, std::abs(sc - sw) / sw);
            }
        }
        rep.max_rel_deviation.push_back(worst);
    }
    rep.monotone_decreasing = true;
    for (std::size_t i = 1; i < rep.max_rel_deviation.size(); ++i)
        if (rep.max_rel_deviation[i] >= rep.max_rel_deviation[i - 1])
            rep.monotone_decreasing = false;
    rep.converged = rep.max_rel_deviation.back() < rep.threshold;
    return rep;
}

std::string LimitCheckReport::to_json() const {
    std::ostringstream os;
    os << std::scientific << std::setprecision(8);
    os << "{\n  \"cutoffs_hz\": [";
    for (std::size_t i = 0; i < cutoffs.size(); ++i)
        os << (i ? ", " : "") << cutoffs[i];
    os << "],\n  \"max_rel_deviation\": [";
    for (std::size_t i = 0; i < max_rel_deviation.size(); ++i)
        os << (i ? ", " : "") << max_rel_deviation[i];
    os << "],\n  \"monotone_decreasing\": " << (monotone_decreasing ? "true" : "false")
       << ",\n  \"converged\": " << (converged ? "true" : "false")
       << ",\n  \"threshold\": " << threshold << "\n}\n";
    return os.str();
}

} // namespace collapsim
