#include <doctest.h>

#include <cmath>
#include <sstream>

#include "elf/error.hpp"
#include "elf/sim.hpp"

using namespace elf;

TEST_CASE("outcome sampling frequency") {
    const AngleVector x = AngleVector::chebyshev(2);
    for (double th : {0.3, 1.1, 2.4}) {
        const double p0 = likelihood(SchemeKind::AF, 0, th, 0.9, x);
        Rng rng(77);
        const int N = 200000;
        int zeros = 0;
        for (int i = 0; i < N; ++i) zeros += sample_outcome(SchemeKind::AF, th, 0.9, x, rng) == 0;
        // Two-cell chi-square with 1 dof, 99.9% quantile 10.83.
        const double e0 = N * p0, e1 = N * (1 - p0);
        const double chi = std::pow(zeros - e0, 2) / e0 + std::pow(N - zeros - e1, 2) / e1;
        CHECK(chi < 10.83);
    }
}

TEST_CASE("scheme names") {
    for (ExperimentScheme s : {ExperimentScheme::AfElf, ExperimentScheme::AfClf, ExperimentScheme::AbElf,
                               ExperimentScheme::AbClf, ExperimentScheme::Standard})
        CHECK(parse_experiment_scheme(to_string(s)) == s);
    CHECK_THROWS_AS(parse_experiment_scheme("af"), Error);
}

TEST_CASE("checkpoint times") {
    auto t = checkpoint_times(13.0, 2e4, 50);
    REQUIRE(!t.empty());
    CHECK(t.front() == 13.0);
    CHECK(t.back() == 13.0 * 1538);
    for (std::size_t i = 1; i < t.size(); ++i) {
        CHECK(t[i] > t[i - 1]);
        CHECK(std::fmod(t[i], 13.0) == 0.0);
    }
    CHECK(checkpoint_times(13.0, 13.0, 50) == std::vector<double>{13.0});
    CHECK(checkpoint_times(1.0, 100.0, 1) == std::vector<double>{1.0, 10.0, 100.0});
    CHECK(checkpoint_times(1.0, 150.0, 1) == std::vector<double>{1.0, 10.0, 100.0, 150.0});
}

TEST_CASE("diagnostics decomposition") {
    std::vector<double> times{1, 2};
    std::vector<std::vector<double>> est{{0.1, 0.5}, {0.3, 0.5}, {0.2, 0.5}};
    std::vector<std::vector<double>> pv{{1, 4}, {2, 4}, {3, 4}};
    auto c = diagnostics(times, 0.25, est, pv);
    CHECK(c[0].bias_sq == doctest::Approx(0.0025));
    CHECK(c[0].var_est == doctest::Approx(0.02 / 3));
    CHECK(c[0].rmse * c[0].rmse == doctest::Approx(c[0].bias_sq + c[0].var_est));
    CHECK(c[0].inv_mse == doctest::Approx(1 / (c[0].rmse * c[0].rmse)));
    CHECK(c[0].mean_perceived_var == doctest::Approx(2.0));
    // Constant estimates: zero variance, all error is bias.
    CHECK(c[1].var_est == 0.0);
    CHECK(c[1].bias_sq == doctest::Approx(0.0625));
    CHECK(c[1].rmse == doctest::Approx(0.25));
}

TEST_CASE("line fit") {
    LinearFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK(fit_line({1}, {1}).n == 1);
}

TEST_CASE("standard sampling") {
    NoiseModel noise{1.0, 0.9};
    const double pi_star = 0.4;
    // Inverse MSE of the SPAM-corrected sample mean grows as p-bar^2 / (1 - p-bar^2 Pi^2) per sample.
    ExperimentConfig c;
    c.scheme = ExperimentScheme::Standard;
    c.true_pi = pi_star;
    c.noise = noise;
    c.runs = 2000;
    c.horizon = 400;
    c.master_seed = 5;
    ExperimentResult r = run_experiment(c);
    CHECK(r.runs_used == 2000);
    const double rate = 0.81 / (1 - 0.81 * 0.16);
    // The rate from 2000 runs has a few percent of sampling spread.
    CHECK(r.growth_rate == doctest::Approx(rate).epsilon(0.1));
    const Checkpoint& last = r.checkpoints.back();
    CHECK(last.time == 400.0);
    CHECK(last.var_est == doctest::Approx(1 / (rate * 400)).epsilon(0.1));
    CHECK(last.mean_perceived_var == doctest::Approx(1 / (rate * 400)).epsilon(0.02));

    Rng rng(1);
    auto tr = standard_sampling_run(pi_star, noise, 10.5, rng);
    CHECK(tr.size() == 11);
    CHECK_THROWS_AS(standard_sampling_run(pi_star, noise, 0.5, rng), Error);
}

namespace {

ExperimentConfig small_clf() {
    ExperimentConfig c;
    c.scheme = ExperimentScheme::AfClf;
    c.true_pi = 0.35;
    c.prior_pi = {0.3, 0.0009};
    c.layers = 2;
    c.noise = {0.9, 1.0};
    c.runs = 40;
    c.horizon = 500;
    c.master_seed = 9;
    return c;
}

}  // namespace

TEST_CASE("single run rmse is the absolute error") {
    ExperimentConfig c = small_clf();
    c.runs = 1;
    ExperimentResult r = run_experiment(c);
    EstimationConfig ec;
    ec.scheme = SchemeKind::AF;
    ec.chebyshev = true;
    ec.layers = 2;
    ec.noise = c.noise;
    ec.true_pi = c.true_pi;
    ec.prior_pi = c.prior_pi;
    ec.time_budget = c.horizon;
    ec.seed = stream_seed(c.master_seed, 0);
    auto tr = run_estimation(ec);
    const Checkpoint& last = r.checkpoints.back();
    CHECK(last.time == tr.back().time);
    CHECK(last.rmse == doctest::Approx(std::abs(tr.back().pi.mean - c.true_pi)).epsilon(1e-14));
    CHECK(last.var_est == 0.0);
}

TEST_CASE("experiments are independent of thread count") {
    ExperimentConfig c = small_clf();
    c.threads = 1;
    ExperimentResult a = run_experiment(c);
    c.threads = 4;
    ExperimentResult b = run_experiment(c);
    std::ostringstream sa, sb;
    write_experiment_csv(sa, a);
    write_experiment_csv(sb, b);
    CHECK(sa.str() == sb.str());
    CHECK(a.growth_rate == b.growth_rate);
    CHECK(sa.str().rfind("time,rmse,inv_mse,bias_sq,var_est,mean_perceived_var\n", 0) == 0);
}

TEST_CASE("experiment config checks") {
    ExperimentConfig c = small_clf();
    c.horizon = 3;
    CHECK_THROWS_AS(run_experiment(c), Error);
    c = small_clf();
    c.runs = 0;
    CHECK_THROWS_AS(run_experiment(c), Error);
    c = small_clf();
    LookupTable t;
    t.layers = 2;
    t.scheme = SchemeKind::AB;
    c.scheme = ExperimentScheme::AfElf;
    c.table = &t;
    CHECK_THROWS_AS(run_experiment(c), Error);
    c.fit_discard = 1.0;
    c.table = nullptr;
    CHECK_THROWS_AS(run_experiment(c), Error);
}
