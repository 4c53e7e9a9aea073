#pragma once

#include <complex>
#include <stdexcept>
#include <variant>

#include "collapsim/constants.hpp"
#include "collapsim/units.hpp"

namespace collapsim {

using Cx = std::complex<double>;

struct SingularEvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gaussian wave packet exp[-alpha (x - x_bar)^2 + i k_bar x]; the global
// normalization phase carries no observable used here and is not stored.
struct GaussianState {
    Cx alpha;           // m^-2, Re > 0
    double x_bar = 0.0; // m
    double k_bar = 0.0; // m^-1

    static GaussianState from_spread(double sigma0);
    void validate() const;
};

// Position-space standard deviation: sigma = (4 Re alpha)^{-1/2}.
double spread(Cx alpha);

struct White {};
struct FiniteTemperature {
    double T; // K
};
struct Colored {
    double cutoff; // s^-1, bandwidth of the exponential noise correlator
};
using NoiseModel = std::variant<White, FiniteTemperature, Colored>;

// A bound system of n nucleons evolving under the collapse noise with
// QMUPL-style coupling lambda_q. n enters the closed forms exactly as the
// composite formulas state it: quadratically in the collapse strength
// (n^2 inside b) and linearly in the inertial mass (n m_0).
struct SystemSpec {
    double n;              // nucleon count, > 0, real-valued allowed
    QmuplCoupling coupling;

    SystemSpec(double n_, QmuplCoupling c) : n(n_), coupling(c) {
        if (!(n_ > 0.0))
            throw std::domain_error("SystemSpec: n must be > 0");
    }
};

// White-noise (simplified CSL / QMUPL) closed form:
//   alpha_t = -(i b / 2) tanh(hbar b t / (n m0) + kappa),
//   b = sqrt(2 i lambda_q m0 n^2 / hbar),
// kappa fixed by alpha_0. Evaluated through the tanh addition formula, so
// no explicit atanh is needed; the singular inputs are |tanh kappa| = 1.
Cx alpha_white(const GaussianState& state0, const SystemSpec& sys, double t);

// Finite-temperature closed form:
//   alpha_t = -1/2 [a + i b tanh(hbar b t / (n m0) + kappa)],
//   a = -i lambda_q hbar n / (2 k_B T),  b = sqrt(|a|^2 + 2 i lambda_q m0 n^2 / hbar).
// Recovers alpha_white as T -> infinity (a -> 0).
Cx alpha_finite_T(const GaussianState& state0, const SystemSpec& sys, double T, double t);

// Colored-noise closed form (exponential correlator (cutoff/2) e^{-cutoff |t-s|}):
//   alpha_t = A_t - B_t^2 / (4 (alpha_0 + A_t))
// with A_t, B_t, Theta_t the two-branch (upsilon_+, upsilon_-) hyperbolic sums.
// Recovers alpha_white as cutoff -> infinity. Hyperbolic terms are evaluated
// in scaled (log-space) form so large cutoff * t does not overflow.
Cx alpha_colored(const GaussianState& state0, const SystemSpec& sys, double cutoff, double t);

// Dispatch on the noise model.
Cx alpha_evolve(const GaussianState& state0, const SystemSpec& sys, const NoiseModel& model,
                double t);

} // namespace collapsim
