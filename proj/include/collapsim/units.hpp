#pragma once

#include <stdexcept>

namespace collapsim {

// Coupling constants of the collapse noise. Internally everything is SI;
// CGS shows up only at the CLI parse/format boundary.
//
// The three parameters are locked together by
//     lambda = gamma / (8 pi^{3/2} r_C^3),
// so a CollapseParams is built from any two and derives the third.

double lambda_from_gamma(double gamma_coupling, double r_C);
double gamma_from_lambda(double lambda_csl, double r_C);

// Bridge from the CSL rate lambda (s^-1) to the position-coupled
// QMUPL-style coupling (m^-2 s^-1) used by the Gaussian dynamics:
//     lambda_q = lambda_csl / (2 r_C^2).
// This is a convention, kept in one place so it can be swapped without
// touching callers.
double qmupl_from_csl(double lambda_csl, double r_C);

struct QmuplCoupling {
    double lambda_q; // m^-2 s^-1

    explicit QmuplCoupling(double lq) : lambda_q(lq) {
        if (!(lq > 0.0))
            throw std::domain_error("QmuplCoupling: lambda_q must be > 0");
    }
};

class CollapseParams {
  public:
    static CollapseParams from_gamma_rc(double gamma_coupling, double r_C);
    static CollapseParams from_lambda_rc(double lambda_csl, double r_C);
    static CollapseParams from_lambda_gamma(double lambda_csl, double gamma_coupling);

    // Conventional CSL values: gamma = 1e-30 cm^3/s, r_C = 1e-7 m.
    static CollapseParams conventional();

    double lambda_csl() const { return lambda_csl_; }
    double r_C() const { return r_C_; }
    double gamma_coupling() const { return gamma_; }

    QmuplCoupling qmupl() const { return QmuplCoupling(qmupl_from_csl(lambda_csl_, r_C_)); }

  private:
    CollapseParams(double lambda, double rc, double gamma)
        : lambda_csl_(lambda), r_C_(rc), gamma_(gamma) {}

    double lambda_csl_; // s^-1
    double r_C_;        // m
    double gamma_;      // m^3 s^-1
};

// CGS boundary helpers (the literature quotes gamma in cm^3/s and r_C in cm).
inline double cm3_to_m3(double v) { return v * 1e-6; }
inline double cm_to_m(double v) { return v * 1e-2; }

} // namespace collapsim
