#include <unsupported/Eigen/Polynomials>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "elf/error.hpp"
#include "elf/tuner.hpp"

namespace elf {

namespace {

// a-th smallest (1-based) real root of the polynomial with ascending coefficients.
double nth_real_root(const std::vector<double>& coeffs, int a) {
    Eigen::VectorXd c(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) c(i) = coeffs[i];
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(c);
    std::vector<double> real;
    solver.realRoots(real, 1e-8);
    std::sort(real.begin(), real.end());
    if (static_cast<int>(real.size()) < a) numeric_error("polynomial has too few real roots");
    return real[a - 1];
}

double arccot(double y) { return std::atan2(1.0, y); }

}  // namespace

std::array<double, 4> l1_slope_breakpoints() {
    static const std::array<double, 4> mu = [] {
        const double r13 = std::sqrt(13.0);
        const std::vector<double> p2{1, 72, -1540, 8568, -16506, 8568, -1540, 72, 1};
        const std::vector<double> p3{9, -264, 2492, -9016, 13302, -9016, 2492, -264, 9};
        return std::array<double, 4>{2 * std::atan(std::sqrt((4 - r13) / 3)),
                                     4 * std::atan(std::sqrt(nth_real_root(p2, 3))),
                                     4 * std::atan(std::sqrt(nth_real_root(p3, 3))),
                                     2 * std::atan(std::sqrt(4 + r13))};
    }();
    return mu;
}

L1SlopeOptimum analytic_l1_slope_optimum(double mu) {
    if (!(mu >= 0.0 && mu <= std::numbers::pi)) domain_error("mu must lie in [0, pi]");
    const auto [m1, m2, m3, m4] = l1_slope_breakpoints();
    const double half = std::numbers::pi / 2;
    const double c = std::cos(mu);
    if (mu <= m1 || mu >= m4) return {3 * std::sin(3 * mu), half, half};
    if (mu >= m2 && mu <= m3) return {-3 * std::sin(3 * mu), half, half};
    if (mu < m2) {
        const double ch = std::cos(mu / 2);
        const double g = arccot(std::sqrt(1 - 3 * c + 1 / c));
        return {4 * std::pow(ch, 4) / std::tan(mu / 2) / (1 + 3 * c), -g, g};
    }
    const double sh = std::sin(mu / 2);
    const double g = arccot(std::sqrt(1 + 3 * c - 1 / c));
    return {4 * std::pow(sh, 4) * std::tan(mu / 2) / (1 - 3 * c), g, g};
}

}  // namespace elf
