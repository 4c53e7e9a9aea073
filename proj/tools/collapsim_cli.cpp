// collapsim: CSL collapse-rate and Gaussian-dynamics calculators, parameter
// sweeps, and the perception-based lambda bound.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "collapsim/collapse_rate.hpp"
#include "collapsim/gaussian.hpp"
#include "collapsim/oracle.hpp"
#include "collapsim/percept.hpp"
#include "collapsim/sweep.hpp"
#include "collapsim/units.hpp"

namespace {

using namespace collapsim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

NoiseModel parse_model(const std::string& spec) {
    if (spec == "white") return White{};
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    if (colon == std::string::npos)
        throw CLI::ValidationError("model", "expected white, ftm:<T>, or colored:<cutoff>");
    double value = std::stod(spec.substr(colon + 1));
    if (kind == "ftm") return FiniteTemperature{value};
    if (kind == "colored") return Colored{value};
    throw CLI::ValidationError("model", "unknown model kind: " + kind);
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
}

CollapseParams params_from_options(std::optional<double> lambda, std::optional<double> gamma_si,
                                   std::optional<double> gamma_cgs, std::optional<double> rc_m,
                                   std::optional<double> rc_cgs) {
    std::optional<double> gamma = gamma_si;
    if (gamma_cgs) gamma = cm3_to_m3(*gamma_cgs);
    std::optional<double> rc = rc_m;
    if (rc_cgs) rc = cm_to_m(*rc_cgs);
    int given = (lambda ? 1 : 0) + (gamma ? 1 : 0) + (rc ? 1 : 0);
    if (given < 2) {
        // Fill the gaps with the conventional values.
        if (!rc) rc = cm_to_m(1e-5);
        if (lambda) return CollapseParams::from_lambda_rc(*lambda, *rc);
        if (gamma) return CollapseParams::from_gamma_rc(*gamma, *rc);
        return CollapseParams::from_gamma_rc(cm3_to_m3(1e-30), *rc);
    }
    if (lambda && rc) return CollapseParams::from_lambda_rc(*lambda, *rc);
    if (gamma && rc) return CollapseParams::from_gamma_rc(*gamma, *rc);
    return CollapseParams::from_lambda_gamma(*lambda, *gamma);
}

unsigned resolve_jobs(unsigned jobs_flag) {
    if (jobs_flag > 0) return jobs_flag;
    if (const char* env = std::getenv("COLLAPSIM_JOBS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return 0; // auto
}

int run_validate(const std::string& out_path) {
    bool ok = true;
    std::ostringstream os;
    os << "{\n  \"riccati_checks\": [\n";

    GaussianState s0 = GaussianState::from_spread(5e-7);
    struct Case {
        double lambda_q, n, t, T; // T <= 0 means white
    };
    const Case cases[] = {
        {1e-3, 1.0, 1e-2, -1.0},   {1e2, 1e3, 1e-2, -1.0}, {1e6, 1e2, 1e-1, -1.0},
        {1e-3, 1.0, 1e-2, 300.0},  {1e2, 1e3, 1e-2, 2.73}, {1e6, 1e2, 1e-1, 1e9},
    };
    bool first = true;
    for (const auto& c : cases) {
        SystemSpec sys(c.n, QmuplCoupling(c.lambda_q));
        Cx closed = c.T > 0 ? alpha_finite_T(s0, sys, c.T, c.t) : alpha_white(s0, sys, c.t);
        RiccatiProblem p = c.T > 0 ? RiccatiProblem::for_finite_T(s0, sys, c.T, c.t)
                                   : RiccatiProblem::for_white(s0, sys, c.t);
        Cx numeric = integrate_riccati(p);
        double rel = std::abs(closed - numeric) / std::abs(closed);
        bool pass = rel < 1e-6;
        ok = ok && pass;
        os << (first ? "" : ",\n") << "    {\"lambda_q\": " << c.lambda_q << ", \"n\": " << c.n
           << ", \"t\": " << c.t << ", \"model\": \"" << (c.T > 0 ? "ftm" : "white")
           << "\", \"rel_error\": " << rel << ", \"pass\": " << (pass ? "true" : "false") << "}";
        first = false;
    }
    os << "\n  ],\n  \"colored_limit\": ";

    LimitCheckGrid grid;
    grid.n_values = {1.0, 1e2, 1e4};
    grid.lambda_q_values = {qmupl_from_csl(1e-5, 1e-7), qmupl_from_csl(1e-2, 1e-7)};
    LimitCheckReport rep = limit_check_colored(grid);
    ok = ok && rep.monotone_decreasing && rep.converged;
    std::string rj = rep.to_json();
    while (!rj.empty() && (rj.back() == '\n')) rj.pop_back();
    os << rj << ",\n  \"pass\": " << (ok ? "true" : "false") << "\n}\n";

    write_output(os.str(), out_path);
    return ok ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"collapse-model numerics: rates, Gaussian dynamics, sweeps, bounds"};
    app.require_subcommand(1);

    // Shared coupling options.
    std::optional<double> opt_lambda, opt_gamma, opt_gamma_cgs, opt_rc, opt_rc_cgs;
    auto add_coupling = [&](CLI::App* cmd) {
        cmd->add_option("--lambda", opt_lambda, "collapse rate lambda (s^-1)");
        cmd->add_option("--gamma", opt_gamma, "coupling gamma (m^3 s^-1)");
        cmd->add_option("--gamma-cgs", opt_gamma_cgs, "coupling gamma (cm^3 s^-1)");
        cmd->add_option("--rc", opt_rc, "correlation length r_C (m)");
        cmd->add_option("--rc-cgs", opt_rc_cgs, "correlation length r_C (cm)");
    };

    auto* cmd_params = app.add_subcommand("params", "convert among lambda, gamma, r_C");
    add_coupling(cmd_params);

    auto* cmd_rate = app.add_subcommand("rate", "collapse rate for a superposed configuration");
    add_coupling(cmd_rate);
    std::string rate_config;
    double rate_time = -1.0;
    double cluster_n = 0.0, cluster_N = 0.0;
    bool rate_consistency = false, rate_cutoff = false;
    cmd_rate->add_option("--config", rate_config,
                         "configuration file (per line: xa ya za xb yb zb in m)");
    cmd_rate->add_option("--cluster-n", cluster_n, "particles per cluster (Gamma = lambda n^2 N)");
    cmd_rate->add_option("--cluster-N", cluster_N, "cluster count");
    cmd_rate->add_option("--time", rate_time, "also print exp(-Gamma t) for this t (s)");
    cmd_rate->add_flag("--consistency", rate_consistency,
                       "compare pairwise rate against the cluster estimate");
    cmd_rate->add_flag("--neighbor-cutoff", rate_cutoff, "drop pair terms beyond 8 r_C");

    auto* cmd_spread = app.add_subcommand("spread", "Gaussian spread sigma_t for one setting");
    add_coupling(cmd_spread);
    std::string spread_model = "white";
    double spread_n = 1.0, spread_sigma0 = 5e-7, spread_time = 1e-2;
    cmd_spread->add_option("--model", spread_model, "white | ftm:<T> | colored:<cutoff>");
    cmd_spread->add_option("--n", spread_n, "particle number (enters as n^2)");
    cmd_spread->add_option("--sigma0", spread_sigma0, "initial spread (m)");
    cmd_spread->add_option("--time", spread_time, "evolution time (s)");

    auto* cmd_sweep = app.add_subcommand("sweep", "spread map over (n, lambda)");
    add_coupling(cmd_sweep);
    std::string sweep_model = "white", sweep_model_b, sweep_out, sweep_contour_out,
                sweep_format = "csv", sweep_config;
    SweepGrid grid;
    unsigned sweep_jobs = 0;
    cmd_sweep->add_option("--model", sweep_model, "model A: white | ftm:<T> | colored:<cutoff>");
    cmd_sweep->add_option("--model-b", sweep_model_b, "optional model B for difference maps");
    cmd_sweep->add_option("--n-min", grid.n_axis.min);
    cmd_sweep->add_option("--n-max", grid.n_axis.max);
    cmd_sweep->add_option("--n-points", grid.n_axis.points);
    cmd_sweep->add_option("--lambda-min", grid.lambda_axis.min);
    cmd_sweep->add_option("--lambda-max", grid.lambda_axis.max);
    cmd_sweep->add_option("--lambda-points", grid.lambda_axis.points);
    cmd_sweep->add_option("--sigma0", grid.sigma0, "initial spread (m)");
    cmd_sweep->add_option("--time", grid.t, "evolution time (s)");
    cmd_sweep->add_option("--jobs", sweep_jobs, "worker threads (default: COLLAPSIM_JOBS or all)");
    cmd_sweep->add_option("--out", sweep_out, "output path (default stdout)");
    cmd_sweep->add_option("--contour-out", sweep_contour_out, "half-spread contour CSV path");
    cmd_sweep->add_option("--format", sweep_format, "csv | json");
    cmd_sweep->add_option("--config", sweep_config, "JSON file overriding sweep defaults");

    auto* cmd_percept = app.add_subcommand("percept", "perception-based lower bound on lambda");
    std::string percept_scenario = "default";
    std::optional<double> percept_cells;
    cmd_percept->add_option("--scenario", percept_scenario, "'default' or a scenario JSON file");
    cmd_percept->add_option("--cells", percept_cells, "override retinal cell count");

    auto* cmd_validate = app.add_subcommand("validate", "run the closed-form oracle suite");
    std::string validate_out;
    cmd_validate->add_option("--out", validate_out, "JSON report path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_params->parsed()) {
            CollapseParams p =
                params_from_options(opt_lambda, opt_gamma, opt_gamma_cgs, opt_rc, opt_rc_cgs);
            std::cout << "lambda   = " << p.lambda_csl() << " s^-1\n"
                      << "gamma    = " << p.gamma_coupling() << " m^3 s^-1 ("
                      << p.gamma_coupling() * 1e6 << " cm^3 s^-1)\n"
                      << "r_C      = " << p.r_C() << " m\n"
                      << "lambda_q = " << p.qmupl().lambda_q << " m^-2 s^-1\n";
            return kExitOk;
        }

        if (cmd_rate->parsed()) {
            CollapseParams p =
                params_from_options(opt_lambda, opt_gamma, opt_gamma_cgs, opt_rc, opt_rc_cgs);
            double gamma_rate = 0.0;
            if (!rate_config.empty()) {
                BranchConfiguration cfg = read_branch_configuration_file(rate_config);
                if (rate_consistency) {
                    ConsistencyReport rep = gamma_consistency_report(cfg, p);
                    std::cout << "Gamma_pairwise = " << rep.gamma_exact << " s^-1\n"
                              << "Gamma_cluster  = " << rep.gamma_cluster << " s^-1\n"
                              << "ratio          = " << rep.ratio
                              << (rep.within_band ? "  (within [0.5, 2])\n"
                                                  : "  (OUTSIDE [0.5, 2])\n");
                    gamma_rate = rep.gamma_exact;
                } else {
                    PairwiseOptions opts;
                    opts.neighbor_cutoff = rate_cutoff;
                    gamma_rate = gamma_pairwise(cfg, p, opts);
                    std::cout << "Gamma_pairwise = " << gamma_rate << " s^-1\n";
                }
            } else if (cluster_n > 0.0 && cluster_N > 0.0) {
                gamma_rate = gamma_clusters({cluster_n, cluster_N}, p.lambda_csl());
                std::cout << "Gamma = lambda n^2 N = " << gamma_rate << " s^-1\n";
            } else {
                std::cerr << "rate: need --config or --cluster-n/--cluster-N\n";
                return kExitUsage;
            }
            if (rate_time >= 0.0)
                std::cout << "exp(-Gamma t) at t = " << rate_time << " s: "
                          << offdiagonal_decay(gamma_rate, rate_time) << "\n";
            return kExitOk;
        }

        if (cmd_spread->parsed()) {
            CollapseParams p =
                params_from_options(opt_lambda, opt_gamma, opt_gamma_cgs, opt_rc, opt_rc_cgs);
            NoiseModel model = parse_model(spread_model);
            GaussianState s0 = GaussianState::from_spread(spread_sigma0);
            SystemSpec sys(spread_n * spread_n, p.qmupl());
            Cx alpha = alpha_evolve(s0, sys, model, spread_time);
            std::cout << "alpha_t = (" << alpha.real() << ", " << alpha.imag() << ") m^-2\n"
                      << "sigma_t = " << spread(alpha) << " m\n";
            return kExitOk;
        }

        if (cmd_sweep->parsed()) {
            if (!sweep_config.empty()) {
                std::ifstream in(sweep_config);
                if (!in) throw std::runtime_error("cannot open config: " + sweep_config);
                nlohmann::json j;
                in >> j;
                // Explicit flags win over the config file.
                if (!cmd_sweep->count("--n-min")) grid.n_axis.min = j.value("n_min", grid.n_axis.min);
                if (!cmd_sweep->count("--n-max")) grid.n_axis.max = j.value("n_max", grid.n_axis.max);
                if (!cmd_sweep->count("--n-points"))
                    grid.n_axis.points = j.value("n_points", grid.n_axis.points);
                if (!cmd_sweep->count("--lambda-min"))
                    grid.lambda_axis.min = j.value("lambda_min", grid.lambda_axis.min);
                if (!cmd_sweep->count("--lambda-max"))
                    grid.lambda_axis.max = j.value("lambda_max", grid.lambda_axis.max);
                if (!cmd_sweep->count("--lambda-points"))
                    grid.lambda_axis.points = j.value("lambda_points", grid.lambda_axis.points);
                if (!cmd_sweep->count("--sigma0")) grid.sigma0 = j.value("sigma0", grid.sigma0);
                if (!cmd_sweep->count("--time")) grid.t = j.value("t", grid.t);
                if (!cmd_sweep->count("--model")) sweep_model = j.value("model", sweep_model);
                if (!cmd_sweep->count("--model-b"))
                    sweep_model_b = j.value("model_b", sweep_model_b);
                if (!cmd_sweep->count("--jobs")) sweep_jobs = j.value("jobs", sweep_jobs);
            }
            CollapseParams p =
                params_from_options(opt_lambda, opt_gamma, opt_gamma_cgs, opt_rc, opt_rc_cgs);
            grid.model_a = parse_model(sweep_model);
            if (!sweep_model_b.empty()) grid.model_b = parse_model(sweep_model_b);
            GridResult res = run_sweep(grid, p, resolve_jobs(sweep_jobs));
            write_output(sweep_format == "json" ? grid_to_json(res) : grid_to_csv(res),
                         sweep_out);
            if (!sweep_contour_out.empty()) write_output(contour_to_csv(res), sweep_contour_out);
            return kExitOk;
        }

        if (cmd_percept->parsed()) {
            PerceptScenario sc = percept_scenario == "default" ? default_scenario()
                                                               : load_scenario(percept_scenario);
            if (percept_cells) sc.cells = *percept_cells;
            LambdaBound b = lambda_lower_bound(sc);
            std::cout << "stages (likely variant):\n";
            for (const auto& s : sc.stages)
                std::cout << "  " << s.label << ": n = " << s.n << ", N = " << s.N
                          << ", n^2 N = " << stage_contribution(s) << "\n";
            std::cout << "photons x cells x sum = " << b.total_likely << "\n"
                      << "lambda (likely)  >= " << b.likely.value << " s^-1, band ["
                      << b.likely.band_lo << ", " << b.likely.band_hi << "]\n";
            if (b.extreme) {
                std::cout << "stages (extreme ion clustering):\n";
                for (const auto& s : sc.stages_extreme)
                    std::cout << "  " << s.label << ": n = " << s.n << ", N = " << s.N
                              << ", n^2 N = " << stage_contribution(s) << "\n";
                std::cout << "lambda (extreme) >= " << b.extreme->value << " s^-1, band ["
                          << b.extreme->band_lo << ", " << b.extreme->band_hi << "]\n"
                          << "lambda interval: [" << b.extreme->value << ", " << b.likely.value
                          << "] s^-1\n";
            }
            return kExitOk;
        }

        if (cmd_validate->parsed()) return run_validate(validate_out);
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SingularEvaluationError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IntegrationFailure& e) {
        std::cerr << "numerical failure: " << e.what() << " (last good t = " << e.last_good_t
                  << ")\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
