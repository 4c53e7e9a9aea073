#pragma once

#include <optional>
#include <string>
#include <vector>

#include "collapsim/gaussian.hpp"
#include "collapsim/units.hpp"

namespace collapsim {

struct LogAxis {
    double min = 0.0;
    double max = 0.0;
    std::size_t points = 0;

    void validate(const char* name) const;
    std::vector<double> values() const;
};

// Heatmap sweep: spread sigma_t over (n, lambda_csl), optionally for a
// second model to produce difference maps. lambda is the CSL rate; the
// dynamics sees qmupl_from_csl(lambda, r_C) and the particle number enters
// the closed forms with n replaced by n^2 (identical bound particles).
struct SweepGrid {
    LogAxis n_axis{1.0, 1e8, 81};
    LogAxis lambda_axis{1e-20, 1.0, 81};
    double sigma0 = 5e-7; // m
    double t = 1e-2;      // s
    NoiseModel model_a = White{};
    std::optional<NoiseModel> model_b;

    void validate() const;
};

struct GridCell {
    double n = 0.0;
    double lambda_csl = 0.0;
    double sigma_a = 0.0;
    std::optional<double> sigma_b;
    std::optional<double> diff_abs;
    std::optional<double> diff_rel;
    bool flagged = false; // singular evaluation; sigma fields are 0
};

struct ContourPoint {
    double n = 0.0;
    double lambda_csl = 0.0;
};

struct GridResult {
    std::vector<double> n_values;
    std::vector<double> lambda_values;
    std::vector<GridCell> cells; // row-major: index = i_n * |lambda| + i_lambda
    std::vector<ContourPoint> threshold_contour; // sigma_a crossing sigma0 / 2

    const GridCell& at(std::size_t i_n, std::size_t i_lambda) const {
        return cells[i_n * lambda_values.size() + i_lambda];
    }
};

// Evaluates the grid cell-by-cell (cells are independent; `jobs` threads,
// statically partitioned so the output never depends on scheduling) and
// extracts the half-spread threshold contour per n column by bisection in
// log lambda to 1% relative.
GridResult run_sweep(const SweepGrid& grid, const CollapseParams& params, unsigned jobs = 0);

// CSV schema: n,lambda_csl,sigma_a,sigma_b,diff_abs,diff_rel,flag with 9
// significant digits in scientific notation (byte-reproducible).
std::string grid_to_csv(const GridResult& result);
std::string grid_to_json(const GridResult& result);
std::string contour_to_csv(const GridResult& result);

} // namespace collapsim
