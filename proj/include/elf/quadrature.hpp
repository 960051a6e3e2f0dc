#pragma once

#include <vector>

namespace elf {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Nodes/weights with sum_i w_i g(z_i) ~ E[g(Z)], Z ~ N(0, 1). Weights sum to 1.
const QuadratureRule& gauss_hermite_normal(int n);
// Gauss-Legendre rule on [-1, 1]; weights sum to 2.
const QuadratureRule& gauss_legendre(int n);

}  // namespace elf
