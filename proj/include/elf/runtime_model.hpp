#pragma once

// Analytic runtime model: noise per time unit lambda and SPAM exponent alpha with
// f^2 = exp(-lambda m - alpha), m = 2L + 1.

#include <string>
#include <vector>

namespace elf {

struct NoiseParams {
    double lambda = 0.0;  // in [0, 1]
    double alpha = 0.0;   // >= 0

    void validate() const;
};

// 1/m at the continuous optimum of the Chebyshev rate bound: (sqrt(lambda^2 + 8 sigma^2) + lambda) / 2.
double optimal_inverse_m(double sigma, double lambda);

// Optimal-rate expression R-bar(sigma; lambda, alpha).
double rbar(double sigma, const NoiseParams& noise);

struct RateBounds {
    double lower = 0.0;  // (e-1)/e R-bar
    double upper = 0.0;  // e/(e-1) R-bar
};
// Bounds on the best Chebyshev rate over L, valid for mu in [0.1 pi, 0.9 pi].
RateBounds chebyshev_rate_bounds(double mu, double sigma, const NoiseParams& noise);

// Worst case over mu of the best Chebyshev rate over L, relative to the upper bound.
struct WorstCaseCell {
    double sigma = 0.0, lambda = 0.0;
    int l_min = 0, l_max = 0;
    double worst_mu = 0.0;
    double ratio = 0.0;  // min_mu max_L R / (e/(e-1) R-bar), alpha = 0
};
struct WorstCaseSearch {
    std::vector<WorstCaseCell> cells;
    double min_ratio = 0.0, max_ratio = 0.0;
};
// L runs over [ceil(L*/3), floor(3 L*)] (at least 1) around L* = (m* - 1)/2; mu takes
// mu_points evenly spaced values of [0.1 pi, 0.9 pi].
WorstCaseSearch chebyshev_worst_case_search(const std::vector<double>& sigmas, const std::vector<double>& lambdas,
                                            int mu_points, int threads = 1);

// dF/dt = R-bar(F^{-1/2}; lambda, alpha) for the inverse variance F.
double inverse_variance_derivative(double F, const NoiseParams& noise);

struct CurvePoint {
    double t = 0.0;
    double F = 0.0;
};
// Adaptive Dormand-Prince 5(4) from F(0) = F0 to t_max; one point per accepted step.
std::vector<CurvePoint> integrate_inverse_variance(const NoiseParams& noise, double F0, double t_max,
                                                  double rtol = 1e-8);
// Time for F to grow from F0 to F_target, integrating dt/d(ln F) with the same scheme.
double time_to_inverse_variance(const NoiseParams& noise, double F0, double F_target, double rtol = 1e-8);

struct RuntimeBounds {
    double lower = 0.0;
    double upper = 0.0;
};
// Runtime bounds (in ansatz durations) to reach MSE eps_theta^2 in theta.
RuntimeBounds runtime_bounds(double eps_theta, double lambda, double spam_fidelity);

struct HardwareParams {
    int qubits = 100;             // n
    double depth = 200;           // two-qubit gate depth per layer, D
    double gate_time = 1e-8;      // seconds per two-qubit layer, G
    double spam_fidelity = 1.0;   // p-bar
    double pi = 0.0;              // eps_theta^2 = eps^2 / (1 - pi^2)
};
double hardware_lambda(const HardwareParams& hw, double f2q);

struct HardwareRow {
    double f2q = 0.0;
    double eps = 0.0;
    double t_lower_s = 0.0, t_upper_s = 0.0, t_mid_s = 0.0;
    bool valid = true;
    std::string flag;
};
// Runtime in seconds per (f2q, eps). Rows with lambda > 1 are kept but flagged.
std::vector<HardwareRow> hardware_runtime_curve(const HardwareParams& hw, const std::vector<double>& f2q,
                                                const std::vector<double>& eps);

}  // namespace elf
