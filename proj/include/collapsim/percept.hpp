#pragma once

#include <optional>
#include <string>
#include <vector>

namespace collapsim {

// One stage of the phototransduction cascade reduced to (n, N):
// N clusters of n nucleons displaced by more than r_C per absorbed photon.
struct StageEstimate {
    std::string label;
    double n = 1.0; // nucleons per cluster
    double N = 1.0; // cluster count

    void validate() const;
};

// Full scenario for the perception-based bound. `stages` is the likely
// ion-clustering variant; `stages_extreme`, when present, is the variant
// where all ions through a channel count as one cluster.
struct PerceptScenario {
    std::vector<StageEstimate> stages;
    std::vector<StageEstimate> stages_extreme;
    double photons = 6.0;          // threshold of vision
    double cells = 1.0;            // retinal cells carrying the signal
    double reaction_time_s = 0.1;  // s
    double criterion = 100.0;      // Gamma * t target for "collapsed"

    void validate() const;
};

// Na+ mass number used by the ion stage of the default scenario.
inline constexpr double kSodiumMassNumber = 23.0;

// n^2 N of a single stage.
double stage_contribution(const StageEstimate& s);

struct LambdaEstimate {
    double value = 0.0;   // s^-1
    double band_lo = 0.0; // value / 10 (the criterion is order-of-magnitude)
    double band_hi = 0.0; // value * 10
};

struct LambdaBound {
    LambdaEstimate likely;
    std::optional<LambdaEstimate> extreme;
    double total_likely = 0.0;  // photons * cells * sum n^2 N
    double total_extreme = 0.0;
};

// lambda >= criterion / (reaction_time * photons * cells * sum n^2 N),
// evaluated for both stage variants. The +-1 order-of-magnitude band on
// the criterion is carried as [band_lo, band_hi].
LambdaBound lambda_lower_bound(const PerceptScenario& sc);

// Smallest single-cluster size n with lambda n^2 >= criterion / t.
double threshold_particle_count(double lambda_csl, double t, double criterion);

// Built-in phototransduction estimate: transducin, cGMP and Na+ stages, six
// photons, 100 ms, Gamma t = 100, with both ion-clustering variants.
PerceptScenario default_scenario();

// JSON scenario files: {stages:[{label,n,N}], stages_extreme?, photons,
// cells, reaction_time_s, criterion}.
PerceptScenario load_scenario(const std::string& path);
std::string scenario_to_json(const PerceptScenario& sc);

} // namespace collapsim
