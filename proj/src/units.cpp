#include "collapsim/units.hpp"

#include <cmath>

namespace collapsim {

namespace {
const double kEightPi32 = 8.0 * std::pow(M_PI, 1.5);

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::domain_error(std::string(what) + " must be finite and > 0");
}
} // namespace

double lambda_from_gamma(double gamma_coupling, double r_C) {
    require_positive(gamma_coupling, "gamma");
    require_positive(r_C, "r_C");
    return gamma_coupling / (kEightPi32 * r_C * r_C * r_C);
}

double gamma_from_lambda(double lambda_csl, double r_C) {
    require_positive(lambda_csl, "lambda");
    require_positive(r_C, "r_C");
    return lambda_csl * kEightPi32 * r_C * r_C * r_C;
}

double qmupl_from_csl(double lambda_csl, double r_C) {
    require_positive(lambda_csl, "lambda");
    require_positive(r_C, "r_C");
    return lambda_csl / (2.0 * r_C * r_C);
}

CollapseParams CollapseParams::from_gamma_rc(double gamma_coupling, double r_C) {
    return CollapseParams(lambda_from_gamma(gamma_coupling, r_C), r_C, gamma_coupling);
}

CollapseParams CollapseParams::from_lambda_rc(double lambda_csl, double r_C) {
    return CollapseParams(lambda_csl, r_C, gamma_from_lambda(lambda_csl, r_C));
}

CollapseParams CollapseParams::from_lambda_gamma(double lambda_csl, double gamma_coupling) {
    require_positive(lambda_csl, "lambda");
    require_positive(gamma_coupling, "gamma");
    double rc = std::cbrt(gamma_coupling / (kEightPi32 * lambda_csl));
    return CollapseParams(lambda_csl, rc, gamma_coupling);
}

CollapseParams CollapseParams::conventional() {
    return from_gamma_rc(cm3_to_m3(1e-30), cm_to_m(1e-5));
}

} // namespace collapsim
