#include "collapsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace collapsim {

void LogAxis::validate(const char* name) const {
    if (!(min > 0.0) || !(max > min))
        throw std::invalid_argument(std::string(name) + ": need 0 < min < max");
    if (points < 2)
        throw std::invalid_argument(std::string(name) + ": need at least 2 points");
}

std::vector<double> LogAxis::values() const {
    std::vector<double> v(points);
    double lmin = std::log10(min), lmax = std::log10(max);
    for (std::size_t i = 0; i < points; ++i)
        v[i] = std::pow(10.0, lmin + (lmax - lmin) * static_cast<double>(i) /
                                  static_cast<double>(points - 1));
    return v;
}

void SweepGrid::validate() const {
    n_axis.validate("n_axis");
    lambda_axis.validate("lambda_axis");
    if (!(sigma0 > 0.0)) throw std::invalid_argument("SweepGrid: sigma0 must be > 0");
    if (!(t > 0.0)) throw std::invalid_argument("SweepGrid: t must be > 0");
}

namespace {

// Bound identical particles: the closed forms take the particle number
// with n replaced by n^2 (quadratic collapse amplification within r_C).
double effective_count(double n) { return n * n; }

double eval_sigma(const NoiseModel& model, double n, double lambda_csl,
                  const CollapseParams& params, double sigma0, double t) {
    QmuplCoupling lq(qmupl_from_csl(lambda_csl, params.r_C()));
    SystemSpec sys(effective_count(n), lq);
    GaussianState s0 = GaussianState::from_spread(sigma0);
    return spread(alpha_evolve(s0, sys, model, t));
}

} // namespace

GridResult run_sweep(const SweepGrid& grid, const CollapseParams& params, unsigned jobs) {
    grid.validate();
    GridResult res;
    res.n_values = grid.n_axis.values();
    res.lambda_values = grid.lambda_axis.values();
    const std::size_t nn = res.n_values.size();
    const std::size_t nl = res.lambda_values.size();
    res.cells.resize(nn * nl);

    auto compute_cell = [&](std::size_t idx) {
        std::size_t i = idx / nl, j = idx % nl;
        GridCell& cell = res.cells[idx];
        cell.n = res.n_values[i];
        cell.lambda_csl = res.lambda_values[j];
        try {
            cell.sigma_a = eval_sigma(grid.model_a, cell.n, cell.lambda_csl, params,
                                      grid.sigma0, grid.t);
            if (grid.model_b) {
                double sb = eval_sigma(*grid.model_b, cell.n, cell.lambda_csl, params,
                                       grid.sigma0, grid.t);
                cell.sigma_b = sb;
                cell.diff_abs = std::abs(cell.sigma_a - sb);
                cell.diff_rel = std::abs(cell.sigma_a - sb) / cell.sigma_a;
            }
        } catch (const SingularEvaluationError&) {
            cell.flagged = true;
            cell.sigma_a = 0.0;
            cell.sigma_b.reset();
            cell.diff_abs.reset();
            cell.diff_rel.reset();
        }
    };

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(res.cells.size()));
    if (jobs <= 1) {
        for (std::size_t idx = 0; idx < res.cells.size(); ++idx) compute_cell(idx);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (res.cells.size() + jobs - 1) / jobs;
        for (unsigned w = 0; w < jobs; ++w) {
            std::size_t lo = w * chunk;
            std::size_t hi = std::min(res.cells.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] {
                for (std::size_t idx = lo; idx < hi; ++idx) compute_cell(idx);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Half-spread threshold per n column: bracket on the lambda grid, then
    // bisect in log lambda to 1% relative.
    const double target = grid.sigma0 / 2.0;
    for (std::size_t i = 0; i < nn; ++i) {
        double n = res.n_values[i];
        std::size_t jcross = nl;
        for (std::size_t j = 0; j + 1 < nl; ++j) {
            const GridCell& c0 = res.at(i, j);
            const GridCell& c1 = res.at(i, j + 1);
            if (c0.flagged || c1.flagged) continue;
            if ((c0.sigma_a - target) * (c1.sigma_a - target) <= 0.0) {
                jcross = j;
                break;
            }
        }
        if (jcross == nl) continue;
        double lo = std::log10(res.lambda_values[jcross]);
        double hi = std::log10(res.lambda_values[jcross + 1]);
        double flo = res.at(i, jcross).sigma_a - target;
        while (std::pow(10.0, hi) - std::pow(10.0, lo) > 0.01 * std::pow(10.0, lo)) {
            double mid = 0.5 * (lo + hi);
            double fmid;
            try {
                fmid = eval_sigma(grid.model_a, n, std::pow(10.0, mid), params, grid.sigma0,
                                  grid.t) -
                       target;
            } catch (const SingularEvaluationError&) {
                break;
            }
            if ((flo < 0.0) == (fmid < 0.0)) {
                lo = mid;
                flo = fmid;
            } else {
                hi = mid;
            }
        }
        res.threshold_contour.push_back({n, std::pow(10.0, 0.5 * (lo + hi))});
    }
    return res;
}

namespace {

std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.8e", v);
    return buf;
}

} // namespace

std::string grid_to_csv(const GridResult& result) {
    std::ostringstream os;
    os << "n,lambda_csl,sigma_a,sigma_b,diff_abs,diff_rel,flag\n";
    for (const auto& c : result.cells) {
        os << fmt9(c.n) << ',' << fmt9(c.lambda_csl) << ',' << fmt9(c.sigma_a) << ',';
        if (c.sigma_b) os << fmt9(*c.sigma_b);
        os << ',';
        if (c.diff_abs) os << fmt9(*c.diff_abs);
        os << ',';
        if (c.diff_rel) os << fmt9(*c.diff_rel);
        os << ',' << (c.flagged ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string contour_to_csv(const GridResult& result) {
    std::ostringstream os;
    os << "n,lambda_csl\n";
    for (const auto& p : result.threshold_contour)
        os << fmt9(p.n) << ',' << fmt9(p.lambda_csl) << '\n';
    return os.str();
}

std::string grid_to_json(const GridResult& result) {
    std::ostringstream os;
    os << "{\n  \"cells\": [\n";
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const auto& c = result.cells[i];
        os << "    {\"n\": " << fmt9(c.n) << ", \"lambda_csl\": " << fmt9(c.lambda_csl)
           << ", \"sigma_a\": " << fmt9(c.sigma_a);
        if (c.sigma_b) os << ", \"sigma_b\": " << fmt9(*c.sigma_b);
        if (c.diff_abs) os << ", \"diff_abs\": " << fmt9(*c.diff_abs);
        if (c.diff_rel) os << ", \"diff_rel\": " << fmt9(*c.diff_rel);
        os << ", \"flag\": " << (c.flagged ? 1 : 0) << "}"
           << (i + 1 < result.cells.size() ? "," : "") << "\n";
    }
    os << "  ],\n  \"threshold_contour\": [\n";
    for (std::size_t i = 0; i < result.threshold_contour.size(); ++i) {
        const auto& p = result.threshold_contour[i];
        os << "    {\"n\": " << fmt9(p.n) << ", \"lambda_csl\": " << fmt9(p.lambda_csl) << "}"
           << (i + 1 < result.threshold_contour.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
}

} // namespace collapsim
