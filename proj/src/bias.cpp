#include "elf/bias.hpp"

#include <cmath>

#include "elf/error.hpp"
#include "elf/kernels.hpp"

namespace elf {

namespace {

constexpr double kImagResidue = 1e-10;

// Real part of an expectation value that must be real; a residue means an ordering bug.
double real_expectation(cplx z) {
    if (std::abs(z.imag()) > kImagResidue) numeric_error("bias has a non-negligible imaginary part");
    return z.real();
}

}  // namespace

double bias_af(double theta, const AngleVector& x) {
    OperatorMatrix q = circuit_q(theta, x);
    return real_expectation((q.adjoint() * observable(theta) * q).a00);
}

double bias_ab(double theta, const AngleVector& x) { return circuit_q(theta, x).a00.real(); }

double bias(SchemeKind scheme, double theta, const AngleVector& x) {
    return scheme == SchemeKind::AF ? bias_af(theta, x) : bias_ab(theta, x);
}

double bias_derivative(SchemeKind scheme, double theta, const AngleVector& x) {
    OperatorMatrix q = circuit_q(theta, x);
    OperatorMatrix dq = circuit_q_derivative(theta, x);
    if (scheme == SchemeKind::AB) return dq.a00.real();
    // 2 Re<0|Q^dag P Q'|0> + <0|Q^dag P' Q|0>
    cplx a = (q.adjoint() * observable(theta) * dq).a00;
    cplx b = (q.adjoint() * observable_derivative(theta) * q).a00;
    return 2.0 * a.real() + real_expectation(b);
}

void bias_many(SchemeKind scheme, const AngleVector& x, std::span<const double> thetas, std::span<double> value,
               std::span<double> deriv) {
    const std::size_t n = thetas.size();
    if (value.size() < n || deriv.size() < n) domain_error("bias_many output spans are too short");
    std::vector<double> cx(x.size()), sx(x.size()), ct(n), st(n);
    for (std::size_t k = 0; k < x.size(); ++k) cx[k] = std::cos(x[k]), sx[k] = std::sin(x[k]);
    for (std::size_t i = 0; i < n; ++i) ct[i] = std::cos(thetas[i]), st[i] = std::sin(thetas[i]);
    kernels::bias_batch({scheme, cx.data(), sx.data(), x.size(), ct.data(), st.data(), n}, value.data(), deriv.data());
}

}  // namespace elf
