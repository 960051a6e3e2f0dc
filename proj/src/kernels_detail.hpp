#pragma once

#include <cmath>
#include <vector>

#include "elf/kernels.hpp"

namespace elf::kernels::detail {

// Per-L constants of the Chebyshev rate kernel, shared by all variants.
struct ClfTerms {
    std::vector<double> m;    // 2L+1
    std::vector<double> msq;  // m^2
    std::vector<double> gm1;  // exp(lambda m + m^2 sigma^2) - 1
};

inline ClfTerms clf_terms(const ClfRateBatch& in) {
    ClfTerms t;
    for (int l = in.l_min; l <= in.l_max; ++l) {
        double m = 2.0 * l + 1.0;
        t.m.push_back(m);
        t.msq.push_back(m * m);
        t.gm1.push_back(std::expm1(in.lambda * m + m * m * in.sigma * in.sigma));
    }
    return t;
}

}  // namespace elf::kernels::detail
