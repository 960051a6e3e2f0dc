#include "elf/metrics.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "elf/bias.hpp"
#include "elf/error.hpp"
#include "elf/quadrature.hpp"

namespace elf {

void NoiseModel::validate() const {
    if (!(layer_fidelity > 0.0 && layer_fidelity <= 1.0)) domain_error("layer fidelity must lie in (0, 1]");
    if (!(spam_fidelity > 0.0 && spam_fidelity <= 1.0)) domain_error("SPAM fidelity must lie in (0, 1]");
}

double NoiseModel::process_fidelity(int layers) const {
    validate();
    return spam_fidelity * std::pow(layer_fidelity, layers);
}

void GaussianBelief::validate() const {
    if (!std::isfinite(mean)) domain_error("belief mean is not finite");
    if (!(var > 0.0) || !std::isfinite(var)) domain_error("belief variance must be positive and finite");
}

double GaussianBelief::sd() const { return std::sqrt(var); }

namespace {

void check_fidelity(double f) {
    if (!(f >= 0.0 && f <= 1.0)) domain_error("fidelity must lie in [0, 1], got " + std::to_string(f));
}

}  // namespace

double likelihood(SchemeKind scheme, int d, double theta, double f, const AngleVector& x) {
    check_fidelity(f);
    if (d != 0 && d != 1) domain_error("outcome must be 0 or 1");
    double fb = f * bias(scheme, theta, x);
    return d == 0 ? 0.5 * (1.0 + fb) : 0.5 * (1.0 - fb);
}

double fisher_from_bias(double f, double b, double bp) {
    double den = 1.0 - f * f * b * b;
    if (den < kSingularityGuard) numeric_error("Fisher information is singular (f|bias| = 1)");
    return f * f * bp * bp / den;
}

double fisher_information(SchemeKind scheme, double theta, double f, const AngleVector& x) {
    check_fidelity(f);
    return fisher_from_bias(f, bias(scheme, theta, x), bias_derivative(scheme, theta, x));
}

double slope(SchemeKind scheme, double theta, double f, const AngleVector& x) {
    check_fidelity(f);
    return 0.5 * f * std::abs(bias_derivative(scheme, theta, x));
}

ExpectedBias expected_bias(SchemeKind scheme, const GaussianBelief& belief, const AngleVector& x) {
    belief.validate();
    const double sigma = belief.sd();
    if (sigma > 1.0) domain_error("expected bias quadrature is only validated for sigma <= 1");
    if (round_time(x.layers()) * sigma > kQuadratureEnvelope)
        domain_error("expected bias quadrature is only validated for (2L+1) sigma <= 6");
    const QuadratureRule& gh = gauss_hermite_normal(kBiasQuadratureNodes);
    std::array<double, kBiasQuadratureNodes> th, val, der;
    for (int i = 0; i < kBiasQuadratureNodes; ++i) th[i] = belief.mean + sigma * gh.nodes[i];
    bias_many(scheme, x, th, val, der);
    ExpectedBias out;
    for (int i = 0; i < kBiasQuadratureNodes; ++i) {
        out.b += gh.weights[i] * val[i];
        out.db_dmu += gh.weights[i] * der[i];
    }
    return out;
}

double variance_reduction_factor(SchemeKind scheme, const GaussianBelief& belief, double f, const AngleVector& x) {
    check_fidelity(f);
    ExpectedBias eb = expected_bias(scheme, belief, x);
    double den = 1.0 - f * f * eb.b * eb.b;
    if (den < kSingularityGuard) numeric_error("variance reduction factor is singular (f|b| = 1)");
    return f * f * eb.db_dmu * eb.db_dmu / den;
}

double inverse_variance_rate(double v, double sigma2, int layers) {
    if (v < 0.0) domain_error("variance reduction factor must be non-negative");
    double den = 1.0 - sigma2 * v;
    if (!(den > 0.0)) numeric_error("inverse-variance rate undefined for sigma^2 V >= 1");
    return v / (round_time(layers) * den);
}

double inverse_variance_rate(SchemeKind scheme, const GaussianBelief& belief, double f, const AngleVector& x) {
    return inverse_variance_rate(variance_reduction_factor(scheme, belief, f, x), belief.var, x.layers());
}

double rhat0(SchemeKind scheme, double pi_star, double f, const AngleVector& x) {
    if (!(std::abs(pi_star) < 1.0)) domain_error("Pi* must lie in (-1, 1)");
    return fisher_information(scheme, std::acos(pi_star), f, x) /
           (round_time(x.layers()) * (1.0 - pi_star * pi_star));
}

}  // namespace elf
