#include "elf/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "elf/error.hpp"
#include "elf/parallel.hpp"

namespace elf {

int sample_outcome(SchemeKind scheme, double theta_star, double f, const AngleVector& x, Rng& rng) {
    return rng.uniform() < likelihood(scheme, 0, theta_star, f, x) ? 0 : 1;
}

const char* to_string(ExperimentScheme s) {
    switch (s) {
        case ExperimentScheme::AfElf: return "af-elf";
        case ExperimentScheme::AfClf: return "af-clf";
        case ExperimentScheme::AbElf: return "ab-elf";
        case ExperimentScheme::AbClf: return "ab-clf";
        case ExperimentScheme::Standard: return "standard";
    }
    return "?";
}

ExperimentScheme parse_experiment_scheme(const std::string& s) {
    for (ExperimentScheme e : {ExperimentScheme::AfElf, ExperimentScheme::AfClf, ExperimentScheme::AbElf,
                               ExperimentScheme::AbClf, ExperimentScheme::Standard})
        if (s == to_string(e)) return e;
    domain_error("unknown experiment scheme '" + s + "' (af-elf, af-clf, ab-elf, ab-clf, standard)");
}

std::vector<RoundRecord> standard_sampling_run(double true_pi, const NoiseModel& noise, double horizon, Rng& rng) {
    noise.validate();
    if (!(std::abs(true_pi) <= 1.0)) domain_error("true Pi must lie in [-1, 1]");
    if (!(horizon >= 1.0)) domain_error("standard sampling needs a horizon of at least one sample");
    const double pb = noise.spam_fidelity;
    const double p0 = 0.5 * (1.0 + pb * true_pi);
    const long n = static_cast<long>(std::floor(horizon + 1e-9));
    std::vector<RoundRecord> trace;
    trace.reserve(n + 1);
    trace.push_back({});
    long zeros = 0;
    for (long k = 1; k <= n; ++k) {
        RoundRecord r;
        r.round = static_cast<int>(k);
        r.time = static_cast<double>(k);
        r.outcome = rng.uniform() < p0 ? 0 : 1;
        zeros += r.outcome == 0;
        double m = (2.0 * zeros - k) / (static_cast<double>(k) * pb);
        r.pi = {m, std::max(0.0, 1.0 - pb * pb * m * m) / (k * pb * pb)};
        trace.push_back(r);
    }
    return trace;
}

void ExperimentConfig::validate() const {
    noise.validate();
    prior_pi.validate();
    if (runs < 1) domain_error("runs must be >= 1");
    if (layers < 1) domain_error("layer count must be >= 1");
    if (!(std::abs(true_pi) < 1.0)) domain_error("true Pi must lie in (-1, 1)");
    const double step = scheme == ExperimentScheme::Standard ? 1.0 : round_time(layers);
    if (!(horizon >= step)) domain_error("horizon is shorter than one round");
    if (checkpoints_per_decade < 1) domain_error("checkpoints per decade must be >= 1");
    if (!(fit_discard >= 0.0 && fit_discard < 1.0)) domain_error("fit discard fraction must lie in [0, 1)");
    if (table && table->layers != layers) domain_error("lookup table was built for a different layer count");
    if (table && scheme == ExperimentScheme::AfElf && table->scheme != SchemeKind::AF)
        domain_error("lookup table scheme does not match the experiment");
    if (table && scheme == ExperimentScheme::AbElf && table->scheme != SchemeKind::AB)
        domain_error("lookup table scheme does not match the experiment");
}

std::vector<double> checkpoint_times(double step, double horizon, int per_decade) {
    const long last = static_cast<long>(std::floor(horizon / step + 1e-9));
    std::vector<double> out;
    long prev = 0;
    for (int j = 0;; ++j) {
        long k = static_cast<long>(std::floor(std::pow(10.0, static_cast<double>(j) / per_decade) + 1e-9));
        if (k > last) break;
        if (k > prev) out.push_back(k * step), prev = k;
    }
    if (last > prev) out.push_back(last * step);
    return out;
}

std::vector<Checkpoint> diagnostics(const std::vector<double>& times, double true_pi,
                                    const std::vector<std::vector<double>>& est,
                                    const std::vector<std::vector<double>>& pvar) {
    std::vector<Checkpoint> out(times.size());
    const double m = static_cast<double>(est.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
        Checkpoint& c = out[j];
        c.time = times[j];
        if (est.empty()) continue;
        double mean = 0, sq = 0, pv = 0;
        for (std::size_t i = 0; i < est.size(); ++i) {
            mean += est[i][j];
            sq += (est[i][j] - true_pi) * (est[i][j] - true_pi);
            pv += pvar[i][j];
        }
        mean /= m;
        double var = 0;
        for (std::size_t i = 0; i < est.size(); ++i) var += (est[i][j] - mean) * (est[i][j] - mean);
        c.rmse = std::sqrt(sq / m);
        c.inv_mse = sq > 0 ? m / sq : std::numeric_limits<double>::infinity();
        c.bias_sq = (mean - true_pi) * (mean - true_pi);
        c.var_est = var / m;
        c.mean_perceived_var = pv / m;
    }
    return out;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LinearFit fit;
    fit.n = static_cast<int>(x.size());
    if (fit.n < 2) return fit;
    double xb = 0, yb = 0;
    for (int i = 0; i < fit.n; ++i) xb += x[i], yb += y[i];
    xb /= fit.n, yb /= fit.n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < fit.n; ++i) {
        sxx += (x[i] - xb) * (x[i] - xb);
        sxy += (x[i] - xb) * (y[i] - yb);
        syy += (y[i] - yb) * (y[i] - yb);
    }
    if (!(sxx > 0)) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = yb - fit.slope * xb;
    fit.r_squared = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    return fit;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const bool standard = cfg.scheme == ExperimentScheme::Standard;
    const double step = standard ? 1.0 : round_time(cfg.layers);
    const std::vector<double> times = checkpoint_times(step, cfg.horizon, cfg.checkpoints_per_decade);

    std::vector<std::vector<double>> est(cfg.runs), pvar(cfg.runs);
    std::vector<std::string> failure(cfg.runs);
    parallel_for(static_cast<std::size_t>(cfg.runs), cfg.threads, [&](std::size_t i) {
        const std::uint64_t seed = stream_seed(cfg.master_seed, i);
        try {
            std::vector<RoundRecord> trace;
            if (standard) {
                Rng rng(seed);
                trace = standard_sampling_run(cfg.true_pi, cfg.noise, cfg.horizon, rng);
            } else {
                EstimationConfig ec;
                ec.scheme = cfg.scheme == ExperimentScheme::AfElf || cfg.scheme == ExperimentScheme::AfClf
                                ? SchemeKind::AF
                                : SchemeKind::AB;
                ec.chebyshev = cfg.scheme == ExperimentScheme::AfClf || cfg.scheme == ExperimentScheme::AbClf;
                ec.layers = cfg.layers;
                ec.noise = cfg.noise;
                ec.true_pi = cfg.true_pi;
                ec.prior_pi = cfg.prior_pi;
                ec.time_budget = cfg.horizon;
                ec.fit_points = cfg.fit_points;
                ec.table = cfg.table;
                ec.fresh_tune = cfg.fresh_tune;
                ec.seed = seed;
                trace = run_estimation(ec);
            }
            est[i].resize(times.size());
            pvar[i].resize(times.size());
            for (std::size_t j = 0; j < times.size(); ++j) {
                const RoundRecord& r = trace.at(static_cast<std::size_t>(std::llround(times[j] / step)));
                est[i][j] = r.pi.mean;
                pvar[i][j] = r.pi.var;
            }
        } catch (const Error& e) {
            failure[i] = e.what();
        }
    });

    ExperimentResult res;
    std::vector<std::vector<double>> est_ok, pvar_ok;
    for (int i = 0; i < cfg.runs; ++i) {
        if (!failure[i].empty()) {
            res.excluded.push_back({i, failure[i]});
            continue;
        }
        est_ok.push_back(std::move(est[i]));
        pvar_ok.push_back(std::move(pvar[i]));
    }
    res.runs_used = static_cast<int>(est_ok.size());
    res.checkpoints = diagnostics(times, cfg.true_pi, est_ok, pvar_ok);
    std::vector<double> x, y;
    for (const Checkpoint& c : res.checkpoints)
        if (c.time >= cfg.fit_discard * cfg.horizon && std::isfinite(c.inv_mse)) x.push_back(c.time), y.push_back(c.inv_mse);
    LinearFit lf = fit_line(x, y);
    res.growth_rate = lf.slope;
    res.intercept = lf.intercept;
    res.r_squared = lf.r_squared;
    res.fit_points = lf.n;
    return res;
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_experiment_csv(std::ostream& out, const ExperimentResult& r) {
    out << "time,rmse,inv_mse,bias_sq,var_est,mean_perceived_var\n";
    for (const Checkpoint& c : r.checkpoints)
        out << num(c.time) << ',' << num(c.rmse) << ',' << num(c.inv_mse) << ',' << num(c.bias_sq) << ','
            << num(c.var_est) << ',' << num(c.mean_perceived_var) << '\n';
}

}  // namespace elf
