#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "elf/metrics.hpp"
#include "elf/qubit_algebra.hpp"
#include "elf/scheme.hpp"
#include "elf/tuner.hpp"

namespace elf {

// Local model bias(theta) ~ sin(r theta + b).
struct SinusoidFit {
    double r = 0.0;
    double b = 0.0;
};

// Moments of cos(theta) for theta ~ N(mu, sigma^2), in closed form.
GaussianBelief theta_to_pi(const GaussianBelief& theta);

// Moments of arccos(clip(Pi, -1, 1)) for Pi ~ N(mu, sigma^2), by quadrature.
GaussianBelief pi_to_theta(const GaussianBelief& pi);
inline constexpr int kPiToThetaNodes = 101;

// Least-squares fit of arcsin(bias) against r theta + b on `fit_points` evenly spaced
// points of [mu - sigma, mu + sigma].
SinusoidFit fit_sinusoid(SchemeKind scheme, const AngleVector& x, const GaussianBelief& theta, int fit_points = 11);

// Gaussian approximation of the posterior over theta after outcome d under the
// likelihood (1 + (-1)^d f sin(r theta + b)) / 2. Matches the exact posterior moments.
GaussianBelief bayes_update(const GaussianBelief& theta, const SinusoidFit& fit, double f, int d);

struct RoundRecord {
    int round = 0;
    double time = 0.0;  // cumulative, in ansatz durations
    int outcome = -1;   // -1 on the initial record
    SinusoidFit fit;
    GaussianBelief theta;
    GaussianBelief pi;
};

struct EstimationConfig {
    SchemeKind scheme = SchemeKind::AF;
    bool chebyshev = false;  // fixed angles pi/2, no tuning
    int layers = 1;
    NoiseModel noise;
    double true_pi = 0.0;
    GaussianBelief prior_pi{0.0, 0.0009};
    double time_budget = 0.0;  // stop before a round would exceed this
    double target_sd = 0.0;    // also stop once the Pi belief sd reaches this (0 disables)
    int fit_points = 11;
    // Angle source for ELF runs: nearest table entry to the Pi estimate. Without a table
    // the angles are tuned afresh each round with `fresh_tune` at theta = mu.
    const LookupTable* table = nullptr;
    TuneSpec fresh_tune;
    std::uint64_t seed = 0;
};

// One adaptive estimation run. The trace starts with the prior as round 0.
std::vector<RoundRecord> run_estimation(const EstimationConfig& config);

// CSV: round,k_time,outcome,r,b,theta_mean,theta_var,pi_mean,pi_var
void write_trace_csv(std::ostream& out, const std::vector<RoundRecord>& trace);

}  // namespace elf
