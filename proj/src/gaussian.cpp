#include "collapsim/gaussian.hpp"

#include <cmath>
#include <sstream>

namespace collapsim {

namespace {

// tanh with saturation handled explicitly: for |Re z| > 20 the rational
// form in exp(-2|Re z|) cannot overflow and is exact to double precision.
Cx stable_tanh(Cx z) {
    if (z.real() > 20.0) {
        Cx e = std::exp(-2.0 * z);
        return (1.0 - e) / (1.0 + e);
    }
    if (z.real() < -20.0) {
        Cx e = std::exp(2.0 * z);
        return -(1.0 - e) / (1.0 + e);
    }
    return std::tanh(z);
}

// alpha_t = -1/2 [a + i b tanh(theta + kappa)] with tanh kappa = tau0,
// evaluated through the addition formula so kappa itself never appears.
Cx mobius_tanh_evolution(Cx alpha0, Cx a, Cx b, Cx theta) {
    Cx tau0 = Cx(0.0, 1.0) * (2.0 * alpha0 + a) / b;
    if (std::abs(tau0 - 1.0) < 1e-15 || std::abs(tau0 + 1.0) < 1e-15)
        throw SingularEvaluationError("alpha evolution: initial condition sits on the "
                                      "tanh branch point (|tanh kappa| = 1)");
    Cx th = stable_tanh(theta);
    Cx den = 1.0 + tau0 * th;
    if (std::abs(den) < 1e-14 * std::max(1.0, std::abs(tau0 * th)))
        throw SingularEvaluationError("alpha evolution: passed through a pole of tanh");
    return -0.5 * (a + Cx(0.0, 1.0) * b * (tau0 + th) / den);
}

} // namespace

GaussianState GaussianState::from_spread(double sigma0) {
    if (!(sigma0 > 0.0))
        throw std::domain_error("GaussianState: sigma0 must be > 0");
    return GaussianState{Cx(1.0 / (4.0 * sigma0 * sigma0), 0.0), 0.0, 0.0};
}

void GaussianState::validate() const {
    if (!(alpha.real() > 0.0))
        throw InvalidStateError("GaussianState: Re(alpha) must be > 0");
}

double spread(Cx alpha) {
    if (!(alpha.real() > 0.0))
        throw InvalidStateError("spread: Re(alpha) must be > 0");
    return 0.5 / std::sqrt(alpha.real());
}

Cx alpha_finite_T(const GaussianState& state0, const SystemSpec& sys, double T, double t) {
    state0.validate();
    if (!(t >= 0.0)) throw std::domain_error("alpha_finite_T: t must be >= 0");
    if (!(T > 0.0)) throw std::domain_error("alpha_finite_T: T must be > 0");
    const double lq = sys.coupling.lambda_q;
    const double n = sys.n;
    Cx a = Cx(0.0, -lq * kHbar * n / (2.0 * kBoltzmann * T));
    Cx b = std::sqrt(std::norm(a) + Cx(0.0, 2.0 * lq * kNucleonMass * n * n / kHbar));
    Cx theta = kHbar * b * t / (n * kNucleonMass);
    return mobius_tanh_evolution(state0.alpha, a, b, theta);
}

Cx alpha_white(const GaussianState& state0, const SystemSpec& sys, double t) {
    state0.validate();
    if (!(t >= 0.0)) throw std::domain_error("alpha_white: t must be >= 0");
    const double lq = sys.coupling.lambda_q;
    const double n = sys.n;
    Cx b = std::sqrt(Cx(0.0, 2.0 * lq * kNucleonMass * n * n / kHbar));
    Cx theta = kHbar * b * t / (n * kNucleonMass);
    return mobius_tanh_evolution(state0.alpha, Cx(0.0, 0.0), b, theta);
}

namespace {

// Hyperbolics of upsilon*t scaled by exp(-Re(upsilon)*t), built from
// half-argument exponentials so nothing overflows for Re(upsilon)*t >> 1.
struct ScaledHyp {
    Cx chs;    // cosh(u t) e^{-R t}
    Cx shs;    // sinh(u t) e^{-R t}
    Cx chm1s;  // (cosh(u t) - 1) e^{-R t}, cancellation-free at small t
    double e0; // e^{-R t}

    ScaledHyp(Cx u, double t) {
        double R = u.real();
        double h = 0.5 * t;
        Cx ep = std::exp(Cx(0.0, u.imag() * h)); // e^{(u - R) t/2}
        Cx em = std::exp(-(u + R) * h);          // e^{-(u + R) t/2}
        Cx shh = 0.5 * (ep - em);
        Cx chh = 0.5 * (ep + em);
        shs = 2.0 * shh * chh;
        chs = shh * shh + chh * chh;
        chm1s = 2.0 * shh * shh;
        e0 = std::exp(-R * t);
    }
};

} // namespace

Cx alpha_colored(const GaussianState& state0, const SystemSpec& sys, double cutoff, double t) {
    state0.validate();
    if (!(t >= 0.0)) throw std::domain_error("alpha_colored: t must be >= 0");
    if (!(cutoff > 0.0)) throw std::domain_error("alpha_colored: cutoff must be > 0");
    const Cx alpha0 = state0.alpha;
    if (t == 0.0) return alpha0; // Theta_0 = 0; the t->0 limit is the identity map.

    const double n = sys.n;
    const double g = cutoff;
    // The correlator coupling lambda_0 equals half the QMUPL lambda_q: only
    // with this normalization does the cutoff -> infinity limit reproduce the
    // white-noise closed form (checked by the oracle suite).
    const double lam0 = 0.5 * sys.coupling.lambda_q;

    const Cx zeta = std::sqrt(Cx(g * g * g * g, -16.0 * g * g * kHbar * lam0 / kNucleonMass));
    const Cx up = std::sqrt(0.5 * (g * g - zeta)); // upsilon_+
    const Cx um = std::sqrt(0.5 * (g * g + zeta)); // upsilon_-
    const Cx up2 = up * up, um2 = um * um;
    const Cx up3 = up2 * up, um3 = um2 * um;

    // a_+- = g u^3 (u^2 -+ zeta), b_+- = u^2 (u^4 -+ g^2 zeta),
    // c = u_+^3 u_-^3, d_+- = -g u_+-^3 u_-+^2; only the combinations below
    // enter, several of which simplify (u_-^2 - u_+^2 = zeta, u_+^2 + u_-^2 = g^2).
    const Cx Ap = g * up3 * (up2 - zeta);
    const Cx Am = g * um3 * (um2 + zeta);
    const Cx Bsum = up3 * up3 + um3 * um3 + g * g * zeta * zeta; // b_+ + b_-
    const Cx c = up3 * um3;
    const Cx Dp = -g * up3 * um2;
    const Cx Dm = -g * um3 * up2;
    const Cx lead = 2.0 * zeta * zeta * g * up * um; // degree-0 value of both brackets
    const Cx uA = g * up * um * (up2 * up2 + um2 * um2 + zeta * zeta); // u+ a_- + u- a_+
    const Cx uD = -g * g * g * up2 * um2;                             // u+ d_+ + u- d_-
    const Cx Em = up * um2 * (um2 * um2 + g * g * zeta - up2 * um2); // u+ b_- - u- c
    const Cx Ep = um * up2 * (up2 * up2 - g * g * zeta - up2 * um2); // u- b_+ - u+ c

    const ScaledHyp hp(up, t), hm(um, t);
    const double s = hp.e0 * hm.e0;

    // (cosh u+ t cosh u- t - 1) * s, grouped so small t stays exact.
    const Cx P = hp.chm1s * hm.chm1s + hp.chm1s * hm.e0 + hm.chm1s * hp.e0;
    const Cx SS = hp.shs * hm.shs;

    const Cx theta_s = -2.0 * c * P + Bsum * SS +
                       2.0 * zeta * g * (um3 * hm.chs * hp.shs - up3 * hp.chs * hm.shs);
    if (theta_s == Cx(0.0, 0.0)) {
        std::ostringstream msg;
        msg << "alpha_colored: Theta vanished at t=" << t << " (cutoff=" << g
            << ", n=" << n << ", lambda_q=" << sys.coupling.lambda_q << ")";
        throw SingularEvaluationError(msg.str());
    }
    const Cx na_s = lead * s + uA * P + uD * SS + Em * hm.shs * hp.chs + Ep * hp.shs * hm.chs;
    const Cx nb_s = lead * s +
                    up * (Am * hm.chm1s * hp.e0 + Dm * hp.chm1s * hm.e0) +
                    um * (Ap * hp.chm1s * hm.e0 + Dp * hm.chm1s * hp.e0) +
                    Em * hm.shs * hp.e0 + Ep * hp.shs * hm.e0;

    const Cx pref = Cx(0.0, -n * kNucleonMass / (2.0 * kHbar));
    const Cx Acal = pref * na_s / theta_s;
    const Cx Bcal = 2.0 * pref * nb_s / theta_s;

    const Cx den = alpha0 + Acal;
    if (std::abs(den) == 0.0) {
        std::ostringstream msg;
        msg << "alpha_colored: alpha_0 + A_t vanished at t=" << t << " (cutoff=" << g
            << ", n=" << n << ", lambda_q=" << sys.coupling.lambda_q << ")";
        throw SingularEvaluationError(msg.str());
    }
    // Divide before squaring so a large transient B cannot overflow.
    const Cx q = (0.5 * Bcal) / den;
    return Acal - 0.5 * Bcal * q;
}

Cx alpha_evolve(const GaussianState& state0, const SystemSpec& sys, const NoiseModel& model,
                double t) {
    return std::visit(
        [&](const auto& m) -> Cx {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, White>)
                return alpha_white(state0, sys, t);
            else if constexpr (std::is_same_v<M, FiniteTemperature>)
                return alpha_finite_T(state0, sys, m.T, t);
            else
                return alpha_colored(state0, sys, m.cutoff, t);
        },
        model);
}

} // namespace collapsim
