#include "elf/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "elf/bias.hpp"
#include "elf/error.hpp"
#include "elf/quadrature.hpp"
#include "elf/rng.hpp"
#include "elf/sim.hpp"

namespace elf {

using std::numbers::pi;

GaussianBelief theta_to_pi(const GaussianBelief& th) {
    th.validate();
    const double e = std::exp(-th.var);
    double mean = std::sqrt(e) * std::cos(th.mean);
    // (1 - e)(1 - e cos 2mu) / 2, with expm1 for small variances.
    double var = -std::expm1(-th.var) * (1.0 - e * std::cos(2.0 * th.mean)) / 2.0;
    return {mean, var};
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

GaussianBelief pi_to_theta(const GaussianBelief& p) {
    p.validate();
    const double s = p.sd();
    // Mass clipped to Pi = -1 (theta = pi) and Pi = +1 (theta = 0).
    const double p_lo = normal_cdf((-1.0 - p.mean) / s);
    const double p_hi = normal_cdf((p.mean - 1.0) / s);
    // Moments are accumulated about theta0 to keep tiny variances accurate.
    const double theta0 = std::acos(std::clamp(p.mean, -1.0, 1.0));
    double m1 = p_lo * (pi - theta0) + p_hi * (0.0 - theta0);
    double m2 = p_lo * (pi - theta0) * (pi - theta0) + p_hi * theta0 * theta0;
    const double a = std::max(-1.0, p.mean - 12.0 * s), b = std::min(1.0, p.mean + 12.0 * s);
    if (a < b) {
        const QuadratureRule& gl = gauss_legendre(kPiToThetaNodes);
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            double y = mid + half * gl.nodes[i];
            double z = (y - p.mean) / s;
            double w = half * gl.weights[i] * std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * pi));
            double d = std::acos(y) - theta0;
            m1 += w * d;
            m2 += w * d * d;
        }
    }
    double var = m2 - m1 * m1;
    if (!(var > 0.0)) var = std::numeric_limits<double>::min();
    return {theta0 + m1, var};
}

SinusoidFit fit_sinusoid(SchemeKind scheme, const AngleVector& x, const GaussianBelief& th, int n) {
    th.validate();
    if (n < 2) numeric_error("sinusoid fit needs at least two points");
    const double s = th.sd();
    std::vector<double> t(n), val(n), der(n);
    for (int i = 0; i < n; ++i) t[i] = th.mean - s + 2.0 * s * i / (n - 1);
    bias_many(scheme, x, t, val, der);
    // Normal equations of the straight-line fit, in centred form.
    double tbar = 0, zbar = 0;
    for (int i = 0; i < n; ++i) {
        val[i] = std::asin(std::clamp(val[i], -1.0 + 1e-12, 1.0 - 1e-12));
        tbar += t[i], zbar += val[i];
    }
    tbar /= n, zbar /= n;
    double stt = 0, stz = 0;
    for (int i = 0; i < n; ++i) {
        stt += (t[i] - tbar) * (t[i] - tbar);
        stz += (t[i] - tbar) * (val[i] - zbar);
    }
    if (!(stt > 0.0)) numeric_error("sinusoid fit is singular (degenerate fit points)");
    double r = stz / stt;
    return {r, zbar - r * tbar};
}

GaussianBelief bayes_update(const GaussianBelief& th, const SinusoidFit& fit, double f, int d) {
    th.validate();
    if (d != 0 && d != 1) domain_error("outcome must be 0 or 1");
    const double sg = d == 0 ? 1.0 : -1.0;
    const double r = fit.r, s2 = th.var;
    const double e = std::exp(-r * r * s2 / 2.0);
    const double ph = r * th.mean + fit.b;
    const double sn = std::sin(ph), cs = std::cos(ph);
    const double den = 1.0 + sg * f * e * sn;
    if (!(den > kSingularityGuard)) numeric_error("posterior update is singular (zero model evidence)");
    double mean = th.mean + sg * f * e * r * s2 * cs / den;
    double var = s2 * (1.0 - f * r * r * s2 * e * (f * e + sg * sn) / (den * den));
    if (!(var > 0.0) || !std::isfinite(mean)) numeric_error("posterior update produced a non-positive variance");
    return {mean, var};
}

std::vector<RoundRecord> run_estimation(const EstimationConfig& c) {
    c.noise.validate();
    c.prior_pi.validate();
    if (c.layers < 1) domain_error("layer count must be >= 1");
    if (!(std::abs(c.true_pi) <= 1.0)) domain_error("true Pi must lie in [-1, 1]");
    if (c.table && c.table->layers != c.layers) domain_error("lookup table was built for a different layer count");
    const double f = c.noise.process_fidelity(c.layers);
    const double theta_star = std::acos(c.true_pi);
    const double step = round_time(c.layers);
    Rng rng(c.seed);

    std::vector<RoundRecord> trace;
    RoundRecord rec;
    rec.pi = c.prior_pi;
    rec.theta = pi_to_theta(c.prior_pi);
    trace.push_back(rec);

    const AngleVector clf = AngleVector::chebyshev(c.layers);
    while (rec.time + step <= c.time_budget * (1.0 + 1e-12) && !(c.target_sd > 0.0 && rec.pi.sd() <= c.target_sd)) {
        const int k = rec.round + 1;
        try {
            AngleVector tuned;
            const AngleVector* x = &clf;
            if (!c.chebyshev) {
                if (c.table) {
                    x = &c.table->nearest(rec.pi.mean).angles;
                } else {
                    TuneSpec spec = c.fresh_tune;
                    spec.scheme = c.scheme;
                    spec.layers = c.layers;
                    spec.f = f;
                    spec.mu = std::clamp(rec.theta.mean, 1e-6, pi - 1e-6);
                    spec.seed = stream_seed(c.seed, static_cast<std::uint64_t>(k));
                    tuned = tune(spec).x_opt;
                    x = &tuned;
                }
            }
            rec.fit = fit_sinusoid(c.scheme, *x, rec.theta, c.fit_points);
            rec.outcome = sample_outcome(c.scheme, theta_star, f, *x, rng);
            rec.theta = bayes_update(rec.theta, rec.fit, f, rec.outcome);
            rec.pi = theta_to_pi(rec.theta);
        } catch (const Error& e) {
            throw Error(e.kind(), "round " + std::to_string(k) + ": " + e.what());
        }
        rec.round = k;
        rec.time = k * step;
        trace.push_back(rec);
    }
    return trace;
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<RoundRecord>& trace) {
    out << "round,k_time,outcome,r,b,theta_mean,theta_var,pi_mean,pi_var\n";
    for (const RoundRecord& r : trace) {
        out << r.round << ',' << num(r.time) << ',';
        if (r.outcome >= 0) out << r.outcome;
        out << ',' << num(r.fit.r) << ',' << num(r.fit.b) << ',' << num(r.theta.mean) << ',' << num(r.theta.var)
            << ',' << num(r.pi.mean) << ',' << num(r.pi.var) << '\n';
    }
}

}  // namespace elf
