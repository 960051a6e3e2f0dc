#pragma once

#include <span>
#include <vector>

#include "elf/qubit_algebra.hpp"
#include "elf/scheme.hpp"

namespace elf {

// Delta(theta; x) = <0|Q^dag P Q|0>.
double bias_af(double theta, const AngleVector& x);
// Lambda(theta; x) = Re <0|Q|0>.
double bias_ab(double theta, const AngleVector& x);
double bias(SchemeKind scheme, double theta, const AngleVector& x);
// d/dtheta of the scheme's bias.
double bias_derivative(SchemeKind scheme, double theta, const AngleVector& x);

// Bias and derivative at many theta values for one angle vector (SIMD-dispatched).
// The bias is a trigonometric polynomial in theta, so quadrature nodes outside (0, pi)
// are accepted here.
void bias_many(SchemeKind scheme, const AngleVector& x, std::span<const double> thetas, std::span<double> value,
               std::span<double> deriv);

}  // namespace elf
