#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "elf/bias.hpp"
#include "elf/csbd.hpp"
#include "elf/error.hpp"
#include "test_util.hpp"

using namespace elf;
using std::numbers::pi;

namespace {

AngleVector with(const AngleVector& x, std::size_t j, double v) {
    AngleVector y = x;
    y.set(j, v);
    return y;
}

}  // namespace

TEST_CASE("reconstruction of bias and derivative") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 60; ++trial) {
        int L = 1 + trial % 6;
        AngleVector x = test::random_angles(rng, L);
        double theta = test::random_theta(rng);
        for (SchemeKind sc : {SchemeKind::AF, SchemeKind::AB}) {
            CsbdTable table(sc, theta, x);
            for (int j = 1; j <= 2 * L; ++j) {
                CsbdCoefficients k = table.coefficients(j);
                if (sc == SchemeKind::AB) CHECK((k.b == 0.0 && k.b_prime == 0.0));
                for (double xj : {0.0, 0.9, -1.3}) {
                    AngleVector y = with(x, j - 1, xj);
                    CHECK(std::abs(k.bias_at(sc, xj) - bias(sc, theta, y)) < 1e-10);
                    CHECK(std::abs(k.deriv_at(sc, xj) - bias_derivative(sc, theta, y)) < 1e-8);
                }
            }
        }
    }
}

TEST_CASE("coefficients ignore the current value of x_j") {
    std::mt19937_64 rng(4);
    AngleVector x = test::random_angles(rng, 4);
    for (SchemeKind sc : {SchemeKind::AF, SchemeKind::AB}) {
        for (int j = 1; j <= 8; ++j) {
            CsbdCoefficients a = CsbdTable(sc, 1.1, x).coefficients(j);
            CsbdCoefficients b = CsbdTable(sc, 1.1, with(x, j - 1, x[j - 1] + 0.77)).coefficients(j);
            CHECK(std::abs(a.c - b.c) < 1e-12);
            CHECK(std::abs(a.s - b.s) < 1e-12);
            CHECK(std::abs(a.b - b.b) < 1e-12);
            CHECK(std::abs(a.c_prime - b.c_prime) < 1e-12);
            CHECK(std::abs(a.s_prime - b.s_prime) < 1e-12);
            CHECK(std::abs(a.b_prime - b.b_prime) < 1e-12);
        }
    }
}

TEST_CASE("Chebyshev angles, first coordinate") {
    for (int L = 1; L <= 5; ++L) {
        for (double theta : {0.4, 1.3, 2.2}) {
            CsbdCoefficients k = coefficients_af(theta, AngleVector::chebyshev(L), 1);
            CHECK(k.bias_at(SchemeKind::AF, pi / 2) == doctest::Approx(std::cos((2 * L + 1) * theta)).epsilon(1e-12));
        }
    }
}

TEST_CASE("all-zero angles, AB slice") {
    AngleVector x = AngleVector::zeros(3);
    for (int j = 1; j <= 6; ++j) {
        CsbdCoefficients k = coefficients_ab(0.9, x, j);
        CHECK(k.c == doctest::Approx(bias_ab(0.9, x)));
        double fd = test::central_diff([&](double t) { return bias_ab(t, with(x, j - 1, 0.6)); }, 0.9);
        CHECK(std::abs(k.deriv_at(SchemeKind::AB, 0.6) - fd) < 1e-6);
    }
}

TEST_CASE("partial derivative in x_j from coefficients") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        int L = 1 + trial % 5;
        AngleVector x = test::random_angles(rng, L);
        double theta = test::random_theta(rng);
        CsbdTable af(SchemeKind::AF, theta, x), ab(SchemeKind::AB, theta, x);
        for (int j = 1; j <= 2 * L; ++j) {
            double xj = x[j - 1];
            CsbdCoefficients k = af.coefficients(j);
            double chi = 2 * (-k.c * std::sin(2 * xj) + k.s * std::cos(2 * xj));
            double fd = test::central_diff([&](double v) { return bias_af(theta, with(x, j - 1, v)); }, xj);
            CHECK(std::abs(chi - fd) < 1e-6);
            CsbdCoefficients m = ab.coefficients(j);
            double chi_ab = -m.c * std::sin(xj) + m.s * std::cos(xj);
            double fd_ab = test::central_diff([&](double v) { return bias_ab(theta, with(x, j - 1, v)); }, xj);
            CHECK(std::abs(chi_ab - fd_ab) < 1e-6);
        }
    }
}

TEST_CASE("sweep matches fresh tables after each committed update") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (SchemeKind sc : {SchemeKind::AF, SchemeKind::AB}) {
        AngleVector x = test::random_angles(rng, 4);
        CsbdSweep sweep(sc, 0.7, x);
        for (int j = 1; j <= 8; ++j) {
            CHECK(sweep.index() == j);
            CsbdCoefficients a = sweep.current();
            CsbdCoefficients b = CsbdTable(sc, 0.7, x).coefficients(j);
            CHECK(std::abs(a.c - b.c) < 1e-13);
            CHECK(std::abs(a.s_prime - b.s_prime) < 1e-13);
            CHECK(std::abs(a.b_prime - b.b_prime) < 1e-13);
            double nx = u(rng);
            x.set(j - 1, nx);
            sweep.commit(x[j - 1]);
        }
    }
}

TEST_CASE("index checks") {
    CHECK_THROWS_AS(coefficients_af(1.0, AngleVector::zeros(1), 0), Error);
    CHECK_THROWS_AS(coefficients_af(1.0, AngleVector::zeros(1), 3), Error);
    CHECK_THROWS_AS(coefficients_ab(1.0, AngleVector::zeros(2), 5), Error);
}
