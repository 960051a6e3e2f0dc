#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "elf/error.hpp"
#include "elf/runtime_model.hpp"

using namespace elf;
using std::numbers::e;
using std::numbers::pi;

namespace {

// The differential equation for F written in the lambda^2 F form.
double printed_rate(double F, double l, double a) {
    const double q = std::sqrt(1.0 + 8.0 / (F * l * l));
    return 2.0 * std::exp(-a - 1.0) / (l * q + l) * std::exp(2.0 / (4.0 + l * l * F + l * l * F * q));
}

// Least-squares slope of ln F against ln t over points with F in [lo, hi].
double loglog_slope(const std::vector<CurvePoint>& c, double lo, double hi) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const CurvePoint& p : c) {
        if (p.t <= 0 || p.F < lo || p.F > hi) continue;
        const double x = std::log(p.t), y = std::log(p.F);
        n += 1, sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    REQUIRE(n >= 5);
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("rbar branch limits") {
    for (double a : {0.0, 0.7}) {
        for (double s : {1e-1, 1e-3}) {
            const double heis = std::exp(-a - 0.5) / (std::numbers::sqrt2 * s);
            CHECK(rbar(s, {0.0, a}) == doctest::Approx(heis).epsilon(1e-12));
        }
        for (double l : {0.5, 1e-2}) {
            const double shot = std::exp(-a - 1.0) / l;
            CHECK(rbar(l * 1e-7, {l, a}) == doctest::Approx(shot).epsilon(1e-6));
        }
    }
    // Generic point sits between the branch values.
    const double r = rbar(0.01, {0.001, 0.0});
    CHECK(r < std::exp(-0.5) / (std::numbers::sqrt2 * 0.01));
    CHECK(r < std::exp(-1.0) / 0.001);
    CHECK(r > 0.0);
}

TEST_CASE("rbar is the rate upper bound at the continuous optimum") {
    // R-bar = max over continuous m of m exp(-m^2 s^2 - l m), by brute force.
    for (double s : {0.1, 0.01, 0.003}) {
        for (double l : {0.0, 0.001, 0.1, 1.0}) {
            double best = 0, best_m = 0;
            for (double m = 0.01; m < 2000; m *= 1.0001) {
                const double v = m * std::exp(-m * m * s * s - l * m);
                if (v > best) best = v, best_m = m;
            }
            CHECK(best == doctest::Approx(rbar(s, {l, 0.0})).epsilon(1e-6));
            CHECK(1.0 / best_m == doctest::Approx(optimal_inverse_m(s, l)).epsilon(2e-4));
        }
    }
}

TEST_CASE("rbar domain") {
    CHECK_THROWS_AS(rbar(0.1, {1.5, 0.0}), Error);
    CHECK_THROWS_AS(rbar(0.0, {0.1, 0.0}), Error);
    CHECK_THROWS_AS(rbar(0.1, {0.1, -1.0}), Error);
    CHECK_NOTHROW(rbar(0.1, {1.0, 0.0}));
}

TEST_CASE("chebyshev rate bounds") {
    for (double mu : {0.1 * pi, 1.0, 0.9 * pi}) {
        RateBounds b = chebyshev_rate_bounds(mu, 0.01, {0.01, 0.3});
        CHECK(b.lower < b.upper);
        CHECK(b.upper / b.lower == doctest::Approx(std::pow(e / (e - 1), 2)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(chebyshev_rate_bounds(0.05 * pi, 0.01, {0.01, 0.0}), Error);
    CHECK_THROWS_AS(chebyshev_rate_bounds(0.95 * pi, 0.01, {0.01, 0.0}), Error);
}

TEST_CASE("worst-case chebyshev search") {
    WorstCaseSearch w = chebyshev_worst_case_search({1e-2}, {1e-2}, 5000);
    REQUIRE(w.cells.size() == 1);
    CHECK(w.cells[0].l_min == 9);
    CHECK(w.cells[0].l_max == 73);
    CHECK(w.min_ratio == doctest::Approx(0.417).epsilon(0.01 / 0.417));

    // The max over L never exceeds the analytic upper bound.
    const std::vector<double> v{1e-1, 1e-2, 1e-3};
    WorstCaseSearch g = chebyshev_worst_case_search(v, v, 2000, 2);
    CHECK(g.cells.size() == 9);
    for (const WorstCaseCell& c : g.cells) {
        CHECK(c.ratio <= 1.0);
        CHECK(c.ratio > 0.3);
        CHECK(c.worst_mu >= 0.1 * pi - 1e-12);
        CHECK(c.worst_mu <= 0.9 * pi + 1e-12);
    }
    WorstCaseSearch g1 = chebyshev_worst_case_search(v, v, 2000, 1);
    for (std::size_t i = 0; i < g.cells.size(); ++i) CHECK(g.cells[i].ratio == g1.cells[i].ratio);
}

TEST_CASE("inverse variance derivative matches the lambda^2 F form") {
    for (double l : {1e-4, 0.01, 0.5, 1.0})
        for (double F : {1e-3, 1.0, 1e4, 1e9})
            for (double a : {0.0, 0.4})
                CHECK(inverse_variance_derivative(F, {l, a}) == doctest::Approx(printed_rate(F, l, a)).epsilon(1e-12));
}

TEST_CASE("ode regimes") {
    // Heisenberg window: F well below 1/lambda^2 = 1e8.
    auto h = integrate_inverse_variance({1e-4, 0.0}, 1e-6, 2e3);
    CHECK(h.back().F < 1e7);
    double sh = loglog_slope(h, 1e2, 1e5);
    CHECK(sh >= 1.9);
    CHECK(sh <= 2.1);

    // Shot-noise window: F well above 1/lambda^2 = 4.
    auto s = integrate_inverse_variance({0.5, 0.0}, 1e-6, 1e7);
    double ss = loglog_slope(s, 1e4, 1e7);
    CHECK(ss >= 0.95);
    CHECK(ss <= 1.05);

    for (std::size_t i = 1; i < s.size(); ++i) {
        CHECK(s[i].F > s[i - 1].F);
        CHECK(s[i].t > s[i - 1].t);
    }
}

TEST_CASE("ode agrees with the closed-form Heisenberg solution") {
    // lambda = 0: dF/dt = c sqrt(F) so sqrt(F) = sqrt(F0) + c t / 2.
    const double c = std::exp(-0.5) / std::numbers::sqrt2;
    auto h = integrate_inverse_variance({0.0, 0.0}, 1.0, 1e3);
    for (const CurvePoint& p : h) CHECK(p.F == doctest::Approx(std::pow(1.0 + c * p.t / 2, 2)).epsilon(1e-7));
    CHECK(time_to_inverse_variance({0.0, 0.0}, 1.0, 1e6) == doctest::Approx(2 * (1e3 - 1.0) / c).epsilon(1e-7));
}

TEST_CASE("alpha shift rescales time by e") {
    for (double l : {1e-3, 0.2}) {
        const double t0 = time_to_inverse_variance({l, 0.0}, 1e-4, 1e6);
        const double t1 = time_to_inverse_variance({l, 1.0}, 1e-4, 1e6);
        CHECK(t1 / t0 == doctest::Approx(e).epsilon(1e-7));
    }
}

TEST_CASE("runtime bounds") {
    // lambda = 0, p-bar = 1.
    for (double eps : {1e-2, 1e-4}) {
        RuntimeBounds b = runtime_bounds(eps, 0.0, 1.0);
        CHECK(b.lower == doctest::Approx((e - 1) / 2 * (1 / (std::sqrt(3.0) * eps) + 2 * std::numbers::sqrt2 / eps))
                             .epsilon(1e-13));
        CHECK(b.lower < b.upper);
    }
    // lambda >> eps: both bounds approach constants times lambda / eps^2.
    const double l = 0.5;
    double prev_lo = 0, prev_hi = 0;
    for (double eps : {1e-4, 1e-6, 1e-8}) {
        RuntimeBounds b = runtime_bounds(eps, l, 1.0);
        const double lo = b.lower / (l / (eps * eps)), hi = b.upper / (l / (eps * eps));
        if (prev_lo > 0) {
            CHECK(std::abs(lo - prev_lo) < 0.05 * prev_lo);
            CHECK(std::abs(hi - prev_hi) < 0.05 * prev_hi);
        }
        prev_lo = lo, prev_hi = hi;
    }
    CHECK(prev_lo == doctest::Approx((e - 1) * std::exp(-l)).epsilon(1e-3));
    CHECK(prev_hi == doctest::Approx(2 * e * e / (e - 1) * std::exp(-l)).epsilon(1e-3));
    // SPAM enters as 1/p-bar^2.
    CHECK(runtime_bounds(1e-3, 0.1, 0.5).lower == doctest::Approx(4 * runtime_bounds(1e-3, 0.1, 1.0).lower));
    CHECK_THROWS_AS(runtime_bounds(0.0, 0.1, 1.0), Error);
    CHECK_THROWS_AS(runtime_bounds(1e-3, 1.1, 1.0), Error);
}

TEST_CASE("ode time lies inside the runtime bounds") {
    // alpha = 0 corresponds to p-bar = exp(-lambda / 2) in the printed prefactor.
    for (double l : {1e-4, 1e-3, 1e-2, 0.1, 0.5}) {
        for (double eps : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) {
            RuntimeBounds b = runtime_bounds(eps, l, std::exp(-l / 2));
            const double F = 1.0 / (eps * eps);
            const double t = time_to_inverse_variance({l, 0.0}, 1e-12 * F, F);
            CHECK(t > b.lower);
            CHECK(t < b.upper);
        }
    }
}

TEST_CASE("hardware mapping") {
    HardwareParams hw;
    CHECK(hardware_lambda(hw, 0.9999) == doctest::Approx(1e4 * std::log(1 / 0.9999)));
    CHECK_THROWS_AS(hardware_lambda(hw, 1.0), Error);

    std::vector<double> f2q;
    for (double k = 3.0; k <= 9.0; k += 0.25) f2q.push_back(1 - std::pow(10.0, -k));
    auto rows = hardware_runtime_curve(hw, f2q, {1e-3, 1e-4, 1e-5});
    REQUIRE(rows.size() == 3 * f2q.size());
    int flagged = 0;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const HardwareRow& r = rows[j];
        const bool bad = hardware_lambda(hw, r.f2q) > 1.0;
        CHECK(r.valid == !bad);
        if (bad) {
            ++flagged;
            CHECK(r.flag == "lambda>1");
            continue;
        }
        CHECK(r.t_lower_s < r.t_mid_s);
        CHECK(r.t_mid_s < r.t_upper_s);
    }
    CHECK(flagged == 3 * 5);  // 99.9% .. 99.99% have lambda > 1
    const std::size_t n = f2q.size();
    for (std::size_t e = 0; e < 3; ++e) {
        for (std::size_t i = 1; i < n; ++i) {
            const HardwareRow &a = rows[e * n + i - 1], &b = rows[e * n + i];
            if (!a.valid || !b.valid) continue;
            CHECK(b.t_mid_s < a.t_mid_s);
            CHECK(b.t_lower_s < a.t_lower_s);
            CHECK(b.t_upper_s < a.t_upper_s);
        }
    }
    // Smaller eps costs more time, row by row.
    for (std::size_t e = 1; e < 3; ++e)
        for (std::size_t i = 0; i < n; ++i)
            if (rows[i].valid) {
                CHECK(rows[e * n + i].t_lower_s > rows[(e - 1) * n + i].t_lower_s);
                CHECK(rows[e * n + i].t_upper_s > rows[(e - 1) * n + i].t_upper_s);
            }
}

TEST_CASE("gate time against gate fidelity") {
    // In the shot-noise dominated regime 1000x slower gates need 1 - f2q 1000x smaller.
    HardwareParams fast, slow;
    slow.gate_time = 1000 * fast.gate_time;
    for (double infid : {3e-6, 1e-6}) {
        const double a = hardware_runtime_curve(fast, {1 - infid}, {1e-6})[0].t_mid_s;
        const double b = hardware_runtime_curve(slow, {1 - infid / 1000}, {1e-6})[0].t_mid_s;
        CHECK(std::abs(b / a - 1) < 0.1);
    }
}

TEST_CASE("eps conversion from Pi to theta") {
    HardwareParams hw;
    HardwareParams off = hw;
    off.pi = 0.6;
    auto a = hardware_runtime_curve(hw, {1 - 1e-7}, {1e-3 / std::sqrt(1 - 0.36)})[0];
    auto b = hardware_runtime_curve(off, {1 - 1e-7}, {1e-3})[0];
    CHECK(b.t_mid_s == doctest::Approx(a.t_mid_s).epsilon(1e-12));
}
