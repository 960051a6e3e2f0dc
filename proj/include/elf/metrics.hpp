#pragma once

#include "elf/qubit_algebra.hpp"
#include "elf/scheme.hpp"

namespace elf {

struct NoiseModel {
    double layer_fidelity = 1.0;  // p
    double spam_fidelity = 1.0;   // p-bar

    void validate() const;
    // f = p-bar * p^L
    double process_fidelity(int layers) const;
};

struct GaussianBelief {
    double mean = 0.0;
    double var = 1.0;

    void validate() const;
    double sd() const;
};

// Number of Gauss-Hermite nodes used for expectations over a Gaussian belief.
inline constexpr int kBiasQuadratureNodes = 41;
// The rule resolves cos(k theta) under N(mu, sigma^2) to ~1e-11 while k sigma <= 6; bias
// has harmonics up to k = 2L+1.
inline constexpr double kQuadratureEnvelope = 6.0;
// 1 - f^2 b^2 below this is treated as a singular input.
inline constexpr double kSingularityGuard = 1e-14;

// P(d | theta; f, x) = (1 + (-1)^d f bias) / 2
double likelihood(SchemeKind scheme, int d, double theta, double f, const AngleVector& x);

// I = f^2 bias'^2 / (1 - f^2 bias^2)
double fisher_information(SchemeKind scheme, double theta, double f, const AngleVector& x);
// Same formula from precomputed bias and derivative; throws on a singular denominator.
double fisher_from_bias(double f, double bias, double bias_prime);

// |dP/dtheta| = f |bias'| / 2
double slope(SchemeKind scheme, double theta, double f, const AngleVector& x);

struct ExpectedBias {
    double b = 0.0;
    double db_dmu = 0.0;
};

// b(mu, sigma; x) = E_{theta ~ N(mu, sigma^2)} bias(theta; x) and its mu-derivative.
ExpectedBias expected_bias(SchemeKind scheme, const GaussianBelief& belief, const AngleVector& x);

// V = f^2 (db/dmu)^2 / (1 - f^2 b^2)
double variance_reduction_factor(SchemeKind scheme, const GaussianBelief& belief, double f, const AngleVector& x);

// T(L) = 2L + 1 in units of the ansatz duration.
inline double round_time(int layers) { return 2.0 * layers + 1.0; }

// R = V / (T(L) (1 - sigma^2 V))
double inverse_variance_rate(double v, double sigma2, int layers);
double inverse_variance_rate(SchemeKind scheme, const GaussianBelief& belief, double f, const AngleVector& x);

// Predicted growth rate of the inverse MSE of the Pi estimate:
//   I(arccos Pi*) / ((2L+1)(1 - Pi*^2))
double rhat0(SchemeKind scheme, double pi_star, double f, const AngleVector& x);

}  // namespace elf
