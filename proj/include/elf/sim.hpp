#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "elf/inference.hpp"
#include "elf/metrics.hpp"
#include "elf/rng.hpp"
#include "elf/tuner.hpp"

namespace elf {

// Bernoulli draw with P(d = 0) = likelihood(scheme, 0, theta*, f, x).
int sample_outcome(SchemeKind scheme, double theta_star, double f, const AngleVector& x, Rng& rng);

enum class ExperimentScheme { AfElf, AfClf, AbElf, AbClf, Standard };
const char* to_string(ExperimentScheme s);
ExperimentScheme parse_experiment_scheme(const std::string& s);

// Sample-mean estimator, one measurement of P per time unit. Outcomes follow
// P(d = 0) = (1 + p-bar Pi*) / 2 and the estimate is divided by p-bar.
std::vector<RoundRecord> standard_sampling_run(double true_pi, const NoiseModel& noise, double horizon, Rng& rng);

struct ExperimentConfig {
    ExperimentScheme scheme = ExperimentScheme::AfElf;
    double true_pi = 0.0;
    GaussianBelief prior_pi{0.0, 0.0009};
    int layers = 1;
    NoiseModel noise;
    int runs = 300;
    double horizon = 1e4;
    std::uint64_t master_seed = 0;
    int threads = 1;
    int fit_points = 11;
    const LookupTable* table = nullptr;  // required for ELF schemes unless fresh tuning is wanted
    TuneSpec fresh_tune;
    int checkpoints_per_decade = 50;
    double fit_discard = 0.25;  // leading fraction of the horizon left out of the rate fit

    void validate() const;
};

struct Checkpoint {
    double time = 0.0;
    double rmse = 0.0;
    double inv_mse = 0.0;
    double bias_sq = 0.0;
    double var_est = 0.0;             // variance of the Pi estimate across runs (1/M normalization)
    double mean_perceived_var = 0.0;  // mean of the belief variance sigma-hat^2
};

struct ExcludedRun {
    int run = 0;
    std::string reason;
};

struct ExperimentResult {
    std::vector<Checkpoint> checkpoints;
    double growth_rate = 0.0;  // slope of inv_mse against time over the fit window
    double intercept = 0.0;
    double r_squared = 0.0;
    int fit_points = 0;
    std::vector<ExcludedRun> excluded;
    int runs_used = 0;
};

// Round-end times at which run statistics are recorded: geometric in time, snapped to
// whole rounds, strictly increasing, ending at the last round within the horizon.
std::vector<double> checkpoint_times(double round_time, double horizon, int per_decade);

ExperimentResult run_experiment(const ExperimentConfig& config);

// Per-checkpoint aggregates from estimates[run][checkpoint] and perceived variances.
std::vector<Checkpoint> diagnostics(const std::vector<double>& times, double true_pi,
                                    const std::vector<std::vector<double>>& estimates,
                                    const std::vector<std::vector<double>>& perceived_var);

struct LinearFit {
    double slope = 0.0, intercept = 0.0, r_squared = 0.0;
    int n = 0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// CSV: time,rmse,inv_mse,bias_sq,var_est,mean_perceived_var
void write_experiment_csv(std::ostream& out, const ExperimentResult& result);

}  // namespace elf
