#pragma once

// 2x2 operators on the virtual qubit span{|A>, P|A>}, basis {|0>, |1>} with |0> = |A>.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace elf {

using cplx = std::complex<double>;

struct OperatorMatrix {
    cplx a00{}, a01{}, a10{}, a11{};

    static OperatorMatrix identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static OperatorMatrix zero() { return {}; }
    static OperatorMatrix pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
    static OperatorMatrix pauli_y() { return {0.0, cplx(0, -1), cplx(0, 1), 0.0}; }
    static OperatorMatrix pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

    OperatorMatrix adjoint() const { return {std::conj(a00), std::conj(a10), std::conj(a01), std::conj(a11)}; }
    cplx trace() const { return a00 + a11; }
    cplx det() const { return a00 * a11 - a01 * a10; }
    bool finite() const;
};

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(cplx s, const OperatorMatrix& a);

// Largest entrywise modulus of a - b.
double max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b);

// Canonical representative of an angle in (-pi, pi].
double canonical_angle(double x);

// The 2L generalized-reflection angles. Stored canonically in (-pi, pi].
class AngleVector {
public:
    AngleVector() = default;
    explicit AngleVector(std::vector<double> values);
    AngleVector(std::initializer_list<double> values) : AngleVector(std::vector<double>(values)) {}

    // All angles pi/2: the Chebyshev likelihood.
    static AngleVector chebyshev(int layers);
    static AngleVector zeros(int layers);

    int layers() const { return static_cast<int>(v_.size() / 2); }
    std::size_t size() const { return v_.size(); }
    double operator[](std::size_t i) const { return v_[i]; }
    void set(std::size_t i, double x) { v_[i] = canonical_angle(x); }
    const std::vector<double>& values() const { return v_; }

    bool operator==(const AngleVector& o) const { return v_ == o.v_; }

private:
    std::vector<double> v_;
};

// P(theta) = cos(theta) Z + sin(theta) X. Requires theta in (0, pi).
OperatorMatrix observable(double theta);
// dP/dtheta = -sin(theta) Z + cos(theta) X.
OperatorMatrix observable_derivative(double theta);

// U(theta; x) = cos(x) I - i sin(x) P(theta).
OperatorMatrix reflection_u(double theta, double x);
// dU/dtheta = i sin(x) (sin(theta) Z - cos(theta) X).
OperatorMatrix reflection_u_derivative(double theta, double x);
// V(x) = cos(x) I - i sin(x) Z.
OperatorMatrix reflection_v(double x);

// Q = V(x_2L) U(x_2L-1) ... V(x_2) U(x_1); the rightmost factor acts first.
OperatorMatrix circuit_q(double theta, const AngleVector& x);
OperatorMatrix circuit_q_derivative(double theta, const AngleVector& x);

// Throws unless theta lies strictly inside (0, pi).
void require_valid_theta(double theta);

}  // namespace elf
