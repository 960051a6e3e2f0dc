#include "elf/qubit_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "elf/error.hpp"

namespace elf {

bool OperatorMatrix::finite() const {
    for (const cplx& z : {a00, a01, a10, a11})
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    return {a.a00 * b.a00 + a.a01 * b.a10, a.a00 * b.a01 + a.a01 * b.a11,
            a.a10 * b.a00 + a.a11 * b.a10, a.a10 * b.a01 + a.a11 * b.a11};
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
    return {a.a00 + b.a00, a.a01 + b.a01, a.a10 + b.a10, a.a11 + b.a11};
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
    return {a.a00 - b.a00, a.a01 - b.a01, a.a10 - b.a10, a.a11 - b.a11};
}

OperatorMatrix operator*(cplx s, const OperatorMatrix& a) { return {s * a.a00, s * a.a01, s * a.a10, s * a.a11}; }

double max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b) {
    return std::max({std::abs(a.a00 - b.a00), std::abs(a.a01 - b.a01), std::abs(a.a10 - b.a10),
                     std::abs(a.a11 - b.a11)});
}

double canonical_angle(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double y = std::remainder(x, two_pi);  // [-pi, pi]
    if (y <= -std::numbers::pi) y += two_pi;
    return y;
}

AngleVector::AngleVector(std::vector<double> values) : v_(std::move(values)) {
    if (v_.size() < 2 || v_.size() % 2 != 0)
        domain_error("angle vector needs an even number (>= 2) of entries, got " + std::to_string(v_.size()));
    for (double& x : v_) {
        if (!std::isfinite(x)) domain_error("angle vector entry is not finite");
        x = canonical_angle(x);
    }
}

AngleVector AngleVector::chebyshev(int layers) {
    if (layers < 1) domain_error("layer count must be >= 1");
    return AngleVector(std::vector<double>(2 * layers, std::numbers::pi / 2));
}

AngleVector AngleVector::zeros(int layers) {
    if (layers < 1) domain_error("layer count must be >= 1");
    return AngleVector(std::vector<double>(2 * layers, 0.0));
}

void require_valid_theta(double theta) {
    if (!(theta > 0.0 && theta < std::numbers::pi))
        domain_error("theta must lie in (0, pi), got " + std::to_string(theta));
}

OperatorMatrix observable(double theta) {
    require_valid_theta(theta);
    double c = std::cos(theta), s = std::sin(theta);
    return {c, s, s, -c};
}

OperatorMatrix observable_derivative(double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    return {-s, c, c, s};
}

OperatorMatrix reflection_u(double theta, double x) {
    require_valid_theta(theta);
    double c = std::cos(theta), s = std::sin(theta);
    double cx = std::cos(x), sx = std::sin(x);
    const cplx mi(0.0, -sx);
    return {cx + mi * c, mi * s, mi * s, cx - mi * c};
}

OperatorMatrix reflection_u_derivative(double theta, double x) {
    double c = std::cos(theta), s = std::sin(theta);
    const cplx is(0.0, std::sin(x));
    return {is * s, -is * c, -is * c, -is * s};
}

OperatorMatrix reflection_v(double x) {
    double cx = std::cos(x), sx = std::sin(x);
    return {cplx(cx, -sx), 0.0, 0.0, cplx(cx, sx)};
}

OperatorMatrix circuit_q(double theta, const AngleVector& x) {
    require_valid_theta(theta);
    OperatorMatrix q = OperatorMatrix::identity();
    for (std::size_t k = 0; k < x.size(); k += 2) {
        q = reflection_u(theta, x[k]) * q;
        q = reflection_v(x[k + 1]) * q;
    }
    return q;
}

OperatorMatrix circuit_q_derivative(double theta, const AngleVector& x) {
    require_valid_theta(theta);
    // Carry (Q_k, dQ_k) through the product: d(W Q) = W' Q + W dQ.
    OperatorMatrix q = OperatorMatrix::identity();
    OperatorMatrix dq = OperatorMatrix::zero();
    for (std::size_t k = 0; k < x.size(); k += 2) {
        OperatorMatrix u = reflection_u(theta, x[k]);
        OperatorMatrix du = reflection_u_derivative(theta, x[k]);
        dq = du * q + u * dq;
        q = u * q;
        OperatorMatrix v = reflection_v(x[k + 1]);
        dq = v * dq;
        q = v * q;
    }
    return dq;
}

}  // namespace elf
