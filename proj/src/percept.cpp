#include "collapsim/percept.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace collapsim {

void StageEstimate::validate() const {
    if (!(n > 0.0) || !std::isfinite(n))
        throw std::domain_error("StageEstimate '" + label + "': n must be > 0");
    if (!(N >= 1.0) || !std::isfinite(N))
        throw std::domain_error("StageEstimate '" + label + "': N must be >= 1");
}

void PerceptScenario::validate() const {
    if (stages.empty())
        throw std::invalid_argument("PerceptScenario: empty stage list");
    for (const auto& s : stages) s.validate();
    for (const auto& s : stages_extreme) s.validate();
    if (!(photons >= 1.0)) throw std::domain_error("PerceptScenario: photons must be >= 1");
    if (!(cells >= 1.0)) throw std::domain_error("PerceptScenario: cells must be >= 1");
    if (!(reaction_time_s > 0.0))
        throw std::domain_error("PerceptScenario: reaction_time_s must be > 0");
    if (!(criterion > 0.0)) throw std::domain_error("PerceptScenario: criterion must be > 0");
}

double stage_contribution(const StageEstimate& s) {
    s.validate();
    return s.n * s.n * s.N;
}

namespace {

LambdaEstimate bound_for(const std::vector<StageEstimate>& stages, const PerceptScenario& sc,
                         double* total_out) {
    double total = 0.0;
    for (const auto& s : stages) total += stage_contribution(s);
    total *= sc.photons * sc.cells;
    if (total_out) *total_out = total;
    LambdaEstimate e;
    e.value = sc.criterion / (sc.reaction_time_s * total);
    e.band_lo = e.value / 10.0;
    e.band_hi = e.value * 10.0;
    return e;
}

} // namespace

LambdaBound lambda_lower_bound(const PerceptScenario& sc) {
    sc.validate();
    LambdaBound b;
    b.likely = bound_for(sc.stages, sc, &b.total_likely);
    if (!sc.stages_extreme.empty())
        b.extreme = bound_for(sc.stages_extreme, sc, &b.total_extreme);
    return b;
}

double threshold_particle_count(double lambda_csl, double t, double criterion) {
    if (!(lambda_csl > 0.0) || !(t > 0.0) || !(criterion > 0.0))
        throw std::domain_error("threshold_particle_count: all inputs must be > 0");
    return std::ceil(std::sqrt(criterion / (lambda_csl * t)));
}

PerceptScenario default_scenario() {
    PerceptScenario sc;
    // Per absorbed photon: ~20 transducin alpha-subunits of molecular
    // weight 3.9e4; ~2000 cGMP molecules of weight 363; Na+ ions through
    // ~300 channels (5 channels per r_C) over 100 ms, either in groups of
    // 3 ions (likely) or a full channel's 10^3 ions (extreme).
    sc.stages = {
        {"transducin", 3.9e4, 20.0},
        {"cGMP", 363.0, 2000.0},
        {"Na+ ions (groups of 3)", 5.0 * 3.0 * kSodiumMassNumber, 60.0 * 333.0},
    };
    sc.stages_extreme = {
        {"transducin", 3.9e4, 20.0},
        {"cGMP", 363.0, 2000.0},
        {"Na+ ions (whole channel)", 5.0 * 1e3 * kSodiumMassNumber, 60.0},
    };
    sc.photons = 6.0;
    sc.cells = 1.0;
    sc.reaction_time_s = 0.1;
    sc.criterion = 100.0;
    return sc;
}

namespace {

std::vector<StageEstimate> stages_from_json(const nlohmann::json& arr) {
    std::vector<StageEstimate> out;
    for (const auto& j : arr) {
        StageEstimate s;
        s.label = j.value("label", "");
        s.n = j.at("n").get<double>();
        s.N = j.at("N").get<double>();
        out.push_back(std::move(s));
    }
    return out;
}

nlohmann::json stages_to_json(const std::vector<StageEstimate>& stages) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : stages)
        arr.push_back({{"label", s.label}, {"n", s.n}, {"N", s.N}});
    return arr;
}

} // namespace

PerceptScenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open scenario file: " + path);
    nlohmann::json j;
    in >> j;
    PerceptScenario sc;
    sc.stages = stages_from_json(j.at("stages"));
    if (j.contains("stages_extreme"))
        sc.stages_extreme = stages_from_json(j["stages_extreme"]);
    sc.photons = j.value("photons", 6.0);
    sc.cells = j.value("cells", 1.0);
    sc.reaction_time_s = j.value("reaction_time_s", 0.1);
    sc.criterion = j.value("criterion", 100.0);
    sc.validate();
    return sc;
}

std::string scenario_to_json(const PerceptScenario& sc) {
    nlohmann::json j;
    j["stages"] = stages_to_json(sc.stages);
    if (!sc.stages_extreme.empty()) j["stages_extreme"] = stages_to_json(sc.stages_extreme);
    j["photons"] = sc.photons;
    j["cells"] = sc.cells;
    j["reaction_time_s"] = sc.reaction_time_s;
    j["criterion"] = sc.criterion;
    return j.dump(2);
}

} // namespace collapsim
