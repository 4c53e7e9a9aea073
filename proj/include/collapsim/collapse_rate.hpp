#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "collapsim/units.hpp"

namespace collapsim {

using Vec3 = std::array<double, 3>;

// Two superposed placements of the same N particles.
struct BranchConfiguration {
    std::vector<Vec3> branch_a; // m
    std::vector<Vec3> branch_b; // m

    std::size_t size() const { return branch_a.size(); }
    void validate() const;
};

// N clusters of n particles each. n may be real-valued for
// nucleon-count (mass) weighting.
struct ClusterSpec {
    double n = 1.0;
    double N = 1.0;

    void validate() const;
};

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gaussian smearing of the mass density, normalized to unit integral:
//   g(x) = (2 pi r_C^2)^{-3/2} exp(-|x|^2 / 2 r_C^2)      [m^-3]
double smearing_g(const Vec3& x, double r_C);

// Self-convolution of the smearing:
//   G(x) = (4 pi r_C^2)^{-3/2} exp(-|x|^2 / 4 r_C^2)      [m^-3]
double kernel_G(const Vec3& x, double r_C);
double kernel_G(double dist2, double r_C);

struct PairwiseOptions {
    // Drop kernel evaluations beyond 8 r_C separation. Off by default;
    // the exact path is the reference, this one is for sweeps.
    bool neighbor_cutoff = false;
    double cutoff_radii = 8.0;
};

// Decay rate of the off-diagonal density-matrix elements between the two
// branches:
//   Gamma = (gamma/2) sum_{i,j} [G(a_i-a_j) + G(b_i-b_j) - 2 G(a_i-b_j)]
// A quadratic form, so >= 0 up to floating-point cancellation.
double gamma_pairwise(const BranchConfiguration& config, const CollapseParams& params,
                      const PairwiseOptions& opts = {});

// Cluster shortcut: Gamma = lambda n^2 N.
double gamma_clusters(const ClusterSpec& spec, double lambda_csl);

// Suppression factor exp(-Gamma t) of an off-diagonal element relative to
// t = 0 (free Hamiltonian neglected).
double offdiagonal_decay(double gamma_rate, double t);

struct ConsistencyReport {
    double gamma_exact = 0.0;     // pairwise sum
    double gamma_cluster = 0.0;   // lambda * sum n_i^2
    double ratio = 0.0;           // exact / cluster
    std::vector<double> cluster_sizes;
    bool within_band = false;     // ratio in [0.5, 2.0]
};

// Compares the exact pairwise rate against the cluster estimate for a
// configuration of well-separated compact clusters (intra-cluster span
// < r_C/4, inter-cluster gap > 4 r_C, branch_b rigidly displaced by
// more than 4 r_C). Violations of that shape raise PreconditionError.
ConsistencyReport gamma_consistency_report(const BranchConfiguration& config,
                                           const CollapseParams& params);

// Plain-text ingestion: one particle per line, six floats
// "xa ya za xb yb zb" in meters, '#' comments allowed.
BranchConfiguration read_branch_configuration(std::istream& in);
BranchConfiguration read_branch_configuration_file(const std::string& path);

} // namespace collapsim
