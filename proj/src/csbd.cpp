#include "elf/csbd.hpp"

#include <cmath>
#include <string>

#include "elf/error.hpp"

namespace elf {

double CsbdCoefficients::bias_at(SchemeKind scheme, double xj) const {
    if (scheme == SchemeKind::AF) return c * std::cos(2 * xj) + s * std::sin(2 * xj) + b;
    return c * std::cos(xj) + s * std::sin(xj);
}

double CsbdCoefficients::deriv_at(SchemeKind scheme, double xj) const {
    if (scheme == SchemeKind::AF) return c_prime * std::cos(2 * xj) + s_prime * std::sin(2 * xj) + b_prime;
    return c_prime * std::cos(xj) + s_prime * std::sin(xj);
}

namespace {

const cplx kI(0.0, 1.0);

Vec2 apply(const OperatorMatrix& a, const Vec2& v) { return {a.a00 * v.v0 + a.a01 * v.v1, a.a10 * v.v0 + a.a11 * v.v1}; }
// Row vector times matrix.
Vec2 apply_row(const Vec2& r, const OperatorMatrix& a) {
    return {r.v0 * a.a00 + r.v1 * a.a10, r.v0 * a.a01 + r.v1 * a.a11};
}
Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.v0 + b.v0, a.v1 + b.v1}; }
// <u|A|v>
cplx sandwich(const Vec2& u, const OperatorMatrix& a, const Vec2& v) {
    Vec2 av = apply(a, v);
    return std::conj(u.v0) * av.v0 + std::conj(u.v1) * av.v1;
}
// row . column
cplx dot(const Vec2& r, const Vec2& c) { return r.v0 * c.v0 + r.v1 * c.v1; }

// Factor j (1-based) of Q and its theta-derivative: U on odd j, V on even j.
struct Factor {
    OperatorMatrix w, dw;
    bool has_dw;
};

Factor factor(double theta, const AngleVector& x, int j) {
    double xj = x[j - 1];
    if (j % 2 == 1) return {reflection_u(theta, xj), reflection_u_derivative(theta, xj), true};
    return {reflection_v(xj), OperatorMatrix::zero(), false};
}

void check_index(int j, int n) {
    if (j < 1 || j > n) domain_error("coordinate index " + std::to_string(j) + " outside 1.." + std::to_string(n));
}

}  // namespace

CsbdTable::CsbdTable(SchemeKind scheme, double theta, const AngleVector& x)
    : scheme_(scheme), theta_(theta), n_(static_cast<int>(x.size())) {
    p_ = observable(theta);
    dp_ = observable_derivative(theta);
    psi_.assign(n_ + 2, {});
    dpsi_.assign(n_ + 2, {});
    psi_[1] = {1.0, 0.0};
    for (int j = 1; j <= n_; ++j) {
        Factor f = factor(theta, x, j);
        psi_[j + 1] = apply(f.w, psi_[j]);
        dpsi_[j + 1] = apply(f.w, dpsi_[j]);
        if (f.has_dw) dpsi_[j + 1] = dpsi_[j + 1] + apply(f.dw, psi_[j]);
    }
    if (scheme == SchemeKind::AF) {
        m_.assign(n_ + 1, {});
        dm_.assign(n_ + 1, {});
        m_[n_] = p_;
        dm_[n_] = dp_;
        for (int j = n_; j >= 1; --j) {
            Factor f = factor(theta, x, j);
            OperatorMatrix wd = f.w.adjoint();
            m_[j - 1] = wd * m_[j] * f.w;
            dm_[j - 1] = wd * dm_[j] * f.w;
            if (f.has_dw) dm_[j - 1] = dm_[j - 1] + f.dw.adjoint() * m_[j] * f.w + wd * m_[j] * f.dw;
        }
    } else {
        row_.assign(n_ + 1, {});
        drow_.assign(n_ + 1, {});
        row_[n_] = {1.0, 0.0};
        for (int j = n_; j >= 1; --j) {
            Factor f = factor(theta, x, j);
            row_[j - 1] = apply_row(row_[j], f.w);
            drow_[j - 1] = apply_row(drow_[j], f.w);
            if (f.has_dw) drow_[j - 1] = drow_[j - 1] + apply_row(row_[j], f.dw);
        }
    }
}

CsbdCoefficients CsbdTable::coefficients(int j) const {
    check_index(j, n_);
    const bool odd = j % 2 == 1;
    const OperatorMatrix g = odd ? p_ : OperatorMatrix::pauli_z();
    const OperatorMatrix dg = odd ? dp_ : OperatorMatrix::zero();
    const Vec2& psi = psi_[j];
    const Vec2& dpsi = dpsi_[j];
    CsbdCoefficients out;

    if (scheme_ == SchemeKind::AB) {
        // Lambda = Re[cos x <0|R L|0> - i sin x <0|R G L|0>]
        const Vec2& row = row_[j];
        const Vec2& drow = drow_[j];
        Vec2 gpsi = apply(g, psi);
        out.c = dot(row, psi).real();
        out.s = dot(row, gpsi).imag();
        out.c_prime = (dot(drow, psi) + dot(row, dpsi)).real();
        out.s_prime = (dot(drow, gpsi) + dot(row, apply(dg, psi)) + dot(row, apply(g, dpsi))).imag();
        return out;
    }

    // F^dag M F with F = cos x I - i sin x G expands into
    //   (M + GMG)/2 + cos 2x (M - GMG)/2 + sin 2x i(GM - MG)/2.
    const OperatorMatrix& m = m_[j];
    const OperatorMatrix& dm = dm_[j];
    const OperatorMatrix gmg = g * m * g;
    const OperatorMatrix kc = m - gmg;
    const OperatorMatrix ks = kI * (g * m - m * g);
    const OperatorMatrix kb = m + gmg;
    const OperatorMatrix dgmg = dg * m * g + g * dm * g + g * m * dg;
    const OperatorMatrix dkc = dm - dgmg;
    const OperatorMatrix dks = kI * (dg * m + g * dm - dm * g - m * dg);
    const OperatorMatrix dkb = dm + dgmg;

    // d/dtheta <psi|K|psi> = 2 Re<psi|K|psi'> + <psi|K'|psi>
    auto half = [&](const OperatorMatrix& k) { return 0.5 * sandwich(psi, k, psi).real(); };
    auto half_prime = [&](const OperatorMatrix& k, const OperatorMatrix& dk) {
        return sandwich(psi, k, dpsi).real() + 0.5 * sandwich(psi, dk, psi).real();
    };
    out.c = half(kc);
    out.s = half(ks);
    out.b = half(kb);
    out.c_prime = half_prime(kc, dkc);
    out.s_prime = half_prime(ks, dks);
    out.b_prime = half_prime(kb, dkb);
    return out;
}

CsbdSweep::CsbdSweep(SchemeKind scheme, double theta, const AngleVector& x) : table_(scheme, theta, x) {}

CsbdCoefficients CsbdSweep::current() const { return table_.coefficients(j_); }

void CsbdSweep::commit(double xj) {
    check_index(j_, table_.n_);
    const double theta = table_.theta_;
    const Vec2& psi = table_.psi_[j_];
    const Vec2& dpsi = table_.dpsi_[j_];
    Vec2 next, dnext;
    if (j_ % 2 == 1) {
        OperatorMatrix w = reflection_u(theta, xj);
        next = apply(w, psi);
        dnext = apply(w, dpsi) + apply(reflection_u_derivative(theta, xj), psi);
    } else {
        OperatorMatrix w = reflection_v(xj);
        next = apply(w, psi);
        dnext = apply(w, dpsi);
    }
    table_.psi_[j_ + 1] = next;
    table_.dpsi_[j_ + 1] = dnext;
    ++j_;
}

CsbdCoefficients coefficients_af(double theta, const AngleVector& x, int j) {
    check_index(j, static_cast<int>(x.size()));
    return CsbdTable(SchemeKind::AF, theta, x).coefficients(j);
}

CsbdCoefficients coefficients_ab(double theta, const AngleVector& x, int j) {
    check_index(j, static_cast<int>(x.size()));
    return CsbdTable(SchemeKind::AB, theta, x).coefficients(j);
}

}  // namespace elf
