#include "collapsim/collapse_rate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace collapsim {

namespace {

double dist2(const Vec3& a, const Vec3& b) {
    double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
}

double norm2(const Vec3& a) { return a[0] * a[0] + a[1] * a[1] + a[2] * a[2]; }

void require_finite(const Vec3& v) {
    for (double c : v)
        if (!std::isfinite(c))
            throw std::invalid_argument("BranchConfiguration: non-finite coordinate");
}

} // namespace

void BranchConfiguration::validate() const {
    if (branch_a.size() != branch_b.size())
        throw std::invalid_argument("BranchConfiguration: branch length mismatch");
    if (branch_a.empty())
        throw std::invalid_argument("BranchConfiguration: empty configuration");
    for (const auto& v : branch_a) require_finite(v);
    for (const auto& v : branch_b) require_finite(v);
}

void ClusterSpec::validate() const {
    if (!(n > 0.0) || !std::isfinite(n))
        throw std::domain_error("ClusterSpec: n must be > 0");
    if (!(N >= 1.0) || !std::isfinite(N))
        throw std::domain_error("ClusterSpec: N must be >= 1");
}

double smearing_g(const Vec3& x, double r_C) {
    if (!(r_C > 0.0))
        throw std::domain_error("smearing_g: r_C must be > 0");
    double s2 = 2.0 * r_C * r_C;
    return std::pow(M_PI * s2, -1.5) * std::exp(-norm2(x) / s2);
}

double kernel_G(double d2, double r_C) {
    if (!(r_C > 0.0))
        throw std::domain_error("kernel_G: r_C must be > 0");
    double s2 = 4.0 * r_C * r_C;
    return std::pow(M_PI * s2, -1.5) * std::exp(-d2 / s2);
}

double kernel_G(const Vec3& x, double r_C) { return kernel_G(norm2(x), r_C); }

double gamma_pairwise(const BranchConfiguration& config, const CollapseParams& params,
                      const PairwiseOptions& opts) {
    config.validate();
    const double rc = params.r_C();
    const double cut2 = opts.neighbor_cutoff
                            ? (opts.cutoff_radii * rc) * (opts.cutoff_radii * rc)
                            : std::numeric_limits<double>::infinity();
    const auto& A = config.branch_a;
    const auto& B = config.branch_b;
    const std::size_t N = A.size();

    // Fixed summation order keeps runs bit-identical.
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            double daa = dist2(A[i], A[j]);
            if (daa <= cut2) sum += kernel_G(daa, rc);
            double dbb = dist2(B[i], B[j]);
            if (dbb <= cut2) sum += kernel_G(dbb, rc);
            double dab = dist2(A[i], B[j]);
            if (dab <= cut2) sum -= 2.0 * kernel_G(dab, rc);
        }
    }
    return 0.5 * params.gamma_coupling() * sum;
}

double gamma_clusters(const ClusterSpec& spec, double lambda_csl) {
    spec.validate();
    if (!(lambda_csl >= 0.0))
        throw std::domain_error("gamma_clusters: lambda must be >= 0");
    return lambda_csl * spec.n * spec.n * spec.N;
}

double offdiagonal_decay(double gamma_rate, double t) {
    if (!(gamma_rate >= 0.0) || !(t >= 0.0))
        throw std::domain_error("offdiagonal_decay: Gamma and t must be >= 0");
    return std::exp(-gamma_rate * t);
}

namespace {

// Single-linkage clustering of branch_a at the given distance threshold.
std::vector<std::vector<std::size_t>> link_clusters(const std::vector<Vec3>& pts,
                                                    double threshold) {
    const std::size_t n = pts.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    double t2 = threshold * threshold;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dist2(pts[i], pts[j]) <= t2) parent[find(i)] = find(j);
    std::vector<std::vector<std::size_t>> groups;
    std::vector<long> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<long>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(slot[r])].push_back(i);
    }
    return groups;
}

} // namespace

ConsistencyReport gamma_consistency_report(const BranchConfiguration& config,
                                           const CollapseParams& params) {
    config.validate();
    const double rc = params.r_C();
    const auto& A = config.branch_a;
    const auto& B = config.branch_b;

    // branch_b must be branch_a rigidly displaced by more than 4 r_C.
    Vec3 d{B[0][0] - A[0][0], B[0][1] - A[0][1], B[0][2] - A[0][2]};
    for (std::size_t i = 1; i < A.size(); ++i) {
        Vec3 di{B[i][0] - A[i][0], B[i][1] - A[i][1], B[i][2] - A[i][2]};
        if (std::sqrt(dist2(di, d)) > 1e-9 * rc)
            throw PreconditionError("gamma_consistency_report: branch_b is not a rigid "
                                    "displacement of branch_a");
    }
    if (std::sqrt(norm2(d)) <= 4.0 * rc)
        throw PreconditionError("gamma_consistency_report: displacement must exceed 4 r_C "
                                "(got " + std::to_string(std::sqrt(norm2(d)) / rc) + " r_C)");

    auto groups = link_clusters(A, rc / 4.0);
    // Intra-cluster span < r_C/4, inter-cluster gap > 4 r_C.
    for (const auto& g : groups)
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = i + 1; j < g.size(); ++j)
                if (dist2(A[g[i]], A[g[j]]) > (rc / 4.0) * (rc / 4.0))
                    throw PreconditionError("gamma_consistency_report: cluster span exceeds r_C/4");
    for (std::size_t a = 0; a < groups.size(); ++a)
        for (std::size_t b = a + 1; b < groups.size(); ++b)
            for (std::size_t i : groups[a])
                for (std::size_t j : groups[b])
                    if (dist2(A[i], A[j]) <= (4.0 * rc) * (4.0 * rc))
                        throw PreconditionError(
                            "gamma_consistency_report: inter-cluster gap below 4 r_C");

    ConsistencyReport rep;
    rep.gamma_exact = gamma_pairwise(config, params);
    double sum_n2 = 0.0;
    for (const auto& g : groups) {
        rep.cluster_sizes.push_back(static_cast<double>(g.size()));
        sum_n2 += static_cast<double>(g.size()) * static_cast<double>(g.size());
    }
    rep.gamma_cluster = params.lambda_csl() * sum_n2;
    rep.ratio = rep.gamma_exact / rep.gamma_cluster;
    rep.within_band = rep.ratio >= 0.5 && rep.ratio <= 2.0;
    return rep;
}

BranchConfiguration read_branch_configuration(std::istream& in) {
    BranchConfiguration cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        Vec3 a, b;
        if (!(ls >> a[0])) continue; // blank or comment-only line
        if (!(ls >> a[1] >> a[2] >> b[0] >> b[1] >> b[2]))
            throw std::invalid_argument("configuration line " + std::to_string(lineno) +
                                        ": expected six floats");
        cfg.branch_a.push_back(a);
        cfg.branch_b.push_back(b);
    }
    cfg.validate();
    return cfg;
}

BranchConfiguration read_branch_configuration_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open configuration file: " + path);
    return read_branch_configuration(in);
}

} // namespace collapsim
