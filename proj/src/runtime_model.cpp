#include "elf/runtime_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "elf/error.hpp"
#include "elf/kernels.hpp"
#include "elf/parallel.hpp"

namespace elf {

using std::numbers::e;
using std::numbers::pi;

void NoiseParams::validate() const {
    if (!(lambda >= 0.0)) domain_error("lambda must be >= 0");
    if (lambda > 1.0) domain_error("the runtime model only applies for lambda <= 1");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) domain_error("alpha must be finite and >= 0");
}

double optimal_inverse_m(double sigma, double lambda) {
    return 0.5 * (std::sqrt(lambda * lambda + 8.0 * sigma * sigma) + lambda);
}

double rbar(double sigma, const NoiseParams& n) {
    n.validate();
    if (!(sigma > 0.0)) domain_error("sigma must be positive");
    const double l = n.lambda, s2 = sigma * sigma;
    const double root = std::sqrt(l * l + 8.0 * s2);
    // lambda^2 sqrt(8 sigma^2 / lambda^2 + 1) written as lambda sqrt(8 sigma^2 + lambda^2).
    return 2.0 * std::exp(-n.alpha - 1.0) / (root + l) * std::exp(2.0 * s2 / (4.0 * s2 + l * l + l * root));
}

RateBounds chebyshev_rate_bounds(double mu, double sigma, const NoiseParams& n) {
    if (!(mu >= 0.1 * pi - 1e-12 && mu <= 0.9 * pi + 1e-12)) domain_error("rate bounds need mu in [0.1 pi, 0.9 pi]");
    const double r = rbar(sigma, n);
    return {(e - 1.0) / e * r, e / (e - 1.0) * r};
}

WorstCaseSearch chebyshev_worst_case_search(const std::vector<double>& sigmas, const std::vector<double>& lambdas,
                                            int mu_points, int threads) {
    if (mu_points < 2) domain_error("need at least two mu points");
    std::vector<double> mu(mu_points), s2(mu_points), c2(mu_points);
    for (int i = 0; i < mu_points; ++i) {
        mu[i] = 0.1 * pi + 0.8 * pi * i / (mu_points - 1);
        s2[i] = std::sin(2 * mu[i]), c2[i] = std::cos(2 * mu[i]);
    }
    WorstCaseSearch out;
    for (double s : sigmas)
        for (double l : lambdas) out.cells.push_back({s, l, 0, 0, 0.0, 0.0});
    parallel_for(out.cells.size(), threads, [&](std::size_t k) {
        WorstCaseCell& cell = out.cells[k];
        const NoiseParams noise{cell.lambda, 0.0};
        const double lstar = (1.0 / optimal_inverse_m(cell.sigma, cell.lambda) - 1.0) / 2.0;
        cell.l_min = std::max(1, static_cast<int>(std::ceil(lstar / 3.0)));
        cell.l_max = std::max(cell.l_min, static_cast<int>(std::floor(3.0 * lstar)));
        std::vector<double> ls(mu_points), lc(mu_points), best(mu_points);
        for (int i = 0; i < mu_points; ++i) {
            const double m0 = 2.0 * cell.l_min + 1.0;
            ls[i] = std::sin(m0 * mu[i]), lc[i] = std::cos(m0 * mu[i]);
        }
        kernels::clf_rate_max({ls.data(), lc.data(), s2.data(), c2.data(), static_cast<std::size_t>(mu_points),
                               cell.l_min, cell.l_max, cell.sigma, cell.lambda},
                              best.data());
        const double upper = e / (e - 1.0) * rbar(cell.sigma, noise);
        auto it = std::min_element(best.begin(), best.end());
        cell.ratio = *it / upper;
        cell.worst_mu = mu[it - best.begin()];
    });
    out.min_ratio = out.max_ratio = out.cells.front().ratio;
    for (const WorstCaseCell& c : out.cells) {
        out.min_ratio = std::min(out.min_ratio, c.ratio);
        out.max_ratio = std::max(out.max_ratio, c.ratio);
    }
    return out;
}

double inverse_variance_derivative(double F, const NoiseParams& n) {
    if (!(F > 0.0)) domain_error("inverse variance must be positive");
    return rbar(1.0 / std::sqrt(F), n);
}

namespace {

// Adaptive Dormand-Prince 5(4) for y' = g(s, y) over [s0, s1]. `emit` sees every
// accepted (s, y). Error is controlled relative to |y|.
template <class G, class Emit>
double dormand_prince(G&& g, double s0, double s1, double y0, double rtol, Emit&& emit) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5, a31 = 3.0 / 40, a32 = 9.0 / 40, a41 = 44.0 / 45, a42 = -56.0 / 15,
                            a43 = 32.0 / 9, a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729, a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656, b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84, e1 = 71.0 / 57600,
                            e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                            e7 = -1.0 / 40;
    if (!(rtol > 0.0)) domain_error("ODE tolerance must be positive");
    double s = s0, y = y0;
    double k1 = g(s, y);
    double h = (s1 - s0) * 1e-6;
    if (y != 0.0 && k1 != 0.0) h = std::min(h, 0.01 * std::abs(y / k1));
    const double hmin = std::abs(s1 - s0) * 1e-15;
    while (s < s1) {
        if (s + h > s1) h = s1 - s;
        const double k2 = g(s + c2 * h, y + h * a21 * k1);
        const double k3 = g(s + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const double k4 = g(s + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const double k5 = g(s + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double k6 = g(s + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const double yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double sn = s + h >= s1 ? s1 : s + h;
        const double k7 = g(sn, yn);
        const double err = std::abs(h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
        const double ratio = err / (rtol * std::max(std::abs(y), std::abs(yn)) + 1e-300);
        if (ratio <= 1.0) {
            s = sn;
            y = yn;
            k1 = k7;
            emit(s, y);
        }
        h *= std::clamp(ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0, 0.2, 5.0);
        if (h < hmin && s < s1) numeric_error("ODE step size underflow");
    }
    return y;
}

}  // namespace

std::vector<CurvePoint> integrate_inverse_variance(const NoiseParams& n, double F0, double t_max, double rtol) {
    n.validate();
    if (!(F0 > 0.0)) domain_error("initial inverse variance must be positive");
    if (!(t_max > 0.0)) domain_error("integration horizon must be positive");
    std::vector<CurvePoint> out{{0.0, F0}};
    dormand_prince([&](double, double F) { return inverse_variance_derivative(F, n); }, 0.0, t_max, F0, rtol,
                   [&](double t, double F) { out.push_back({t, F}); });
    return out;
}

double time_to_inverse_variance(const NoiseParams& n, double F0, double F_target, double rtol) {
    n.validate();
    if (!(F0 > 0.0) || !(F_target > F0)) domain_error("need 0 < F0 < F_target");
    // u = ln F, dt/du = F / R-bar.
    auto dt_du = [&](double u, double) {
        const double F = std::exp(u);
        return F / inverse_variance_derivative(F, n);
    };
    return dormand_prince(dt_du, std::log(F0), std::log(F_target), 0.0, rtol, [](double, double) {});
}

RuntimeBounds runtime_bounds(double eps, double lambda, double spam) {
    if (!(eps > 0.0)) domain_error("target error must be positive");
    if (!(lambda >= 0.0 && lambda <= 1.0)) domain_error("runtime bounds need lambda in [0, 1]");
    if (!(spam > 0.0 && spam <= 1.0)) domain_error("SPAM fidelity must lie in (0, 1]");
    const double pre = std::exp(-lambda) / (spam * spam);
    const double a = lambda / (eps * eps);
    const double root = std::sqrt(a * a + std::pow(2.0 * std::numbers::sqrt2 / eps, 2));
    return {(e - 1.0) * pre / 2.0 * (a + 1.0 / (std::sqrt(3.0) * eps) + root),
            e * e / (e - 1.0) * pre * (a + 1.0 / (std::numbers::sqrt2 * eps) + root)};
}

double hardware_lambda(const HardwareParams& hw, double f2q) {
    if (!(f2q > 0.0 && f2q < 1.0)) domain_error("two-qubit gate fidelity must lie in (0, 1)");
    return 0.5 * hw.qubits * hw.depth * std::log(1.0 / f2q);
}

std::vector<HardwareRow> hardware_runtime_curve(const HardwareParams& hw, const std::vector<double>& f2q,
                                                const std::vector<double>& eps) {
    if (hw.qubits < 1 || !(hw.depth > 0) || !(hw.gate_time > 0)) domain_error("invalid hardware parameters");
    if (!(hw.spam_fidelity > 0.0 && hw.spam_fidelity <= 1.0)) domain_error("SPAM fidelity must lie in (0, 1]");
    if (!(std::abs(hw.pi) < 1.0)) domain_error("Pi must lie in (-1, 1)");
    const double unit = hw.depth * hw.gate_time;  // seconds per ansatz duration
    std::vector<HardwareRow> rows;
    for (double ep : eps) {
        if (!(ep > 0.0)) domain_error("target error must be positive");
        const double et = ep / std::sqrt(1.0 - hw.pi * hw.pi);
        for (double f : f2q) {
            HardwareRow r;
            r.f2q = f;
            r.eps = ep;
            const double lam = hardware_lambda(hw, f);
            if (lam > 1.0) {
                r.valid = false;
                r.flag = "lambda>1";
                rows.push_back(r);
                continue;
            }
            RuntimeBounds b = runtime_bounds(et, lam, hw.spam_fidelity);
            // Midline: rate equal to R-bar with zero estimator bias.
            const double a = lam / (et * et);
            const double mid = e * std::exp(-lam) / (2.0 * hw.spam_fidelity * hw.spam_fidelity) *
                               (a + 1.0 / (std::sqrt(3.0) * et) + std::sqrt(a * a + 8.0 / (et * et)));
            r.t_lower_s = b.lower * unit;
            r.t_upper_s = b.upper * unit;
            r.t_mid_s = mid * unit;
            rows.push_back(r);
        }
    }
    return rows;
}

}  // namespace elf
