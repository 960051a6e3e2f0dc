#pragma once

// Cosine-sine(-bias) decomposition of the bias with respect to one angle x_j:
//   AF: Delta  = c cos(2 x_j) + s sin(2 x_j) + b
//   AB: Lambda = c cos(x_j)   + s sin(x_j)
// and the same for the theta-derivative with the primed coefficients.

#include <array>
#include <vector>

#include "elf/qubit_algebra.hpp"
#include "elf/scheme.hpp"

namespace elf {

struct CsbdCoefficients {
    double c = 0, s = 0, b = 0;
    double c_prime = 0, s_prime = 0, b_prime = 0;

    double bias_at(SchemeKind scheme, double xj) const;
    double deriv_at(SchemeKind scheme, double xj) const;
};

struct Vec2 {
    cplx v0{}, v1{};
};

// Prefix/suffix tables for one (theta, x). O(L) to build, O(1) per coordinate query.
class CsbdTable {
public:
    CsbdTable(SchemeKind scheme, double theta, const AngleVector& x);

    // j is 1-based, 1..2L. The result does not depend on x_j.
    CsbdCoefficients coefficients(int j) const;
    int size() const { return n_; }

private:
    friend class CsbdSweep;
    SchemeKind scheme_;
    double theta_;
    int n_;
    OperatorMatrix p_, dp_;
    std::vector<Vec2> psi_, dpsi_;          // state entering factor j
    std::vector<OperatorMatrix> m_, dm_;    // AF: R_j^dag P R_j
    std::vector<Vec2> row_, drow_;          // AB: <0| R_j, stored as a row
};

// Forward coordinate sweep for coordinate ascent: the suffix tables stay valid while
// x_1..x_{j-1} change, so the prefix is advanced with each committed angle.
class CsbdSweep {
public:
    CsbdSweep(SchemeKind scheme, double theta, const AngleVector& x);
    // Coefficients for the current coordinate (starting at j = 1).
    CsbdCoefficients current() const;
    int index() const { return j_; }
    // Apply the (possibly updated) angle for the current coordinate and move on.
    void commit(double xj);

private:
    CsbdTable table_;
    int j_ = 1;
};

CsbdCoefficients coefficients_af(double theta, const AngleVector& x, int j);
CsbdCoefficients coefficients_ab(double theta, const AngleVector& x, int j);

}  // namespace elf
