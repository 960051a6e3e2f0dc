#pragma once

// Batched inner loops with a scalar reference and SIMD variants chosen at run time.
// Every variant performs the same operations in the same order per lane, so results
// agree bit for bit with the scalar path (the build disables FP contraction).

#include <cstddef>

#include "elf/scheme.hpp"

namespace elf::kernels {

enum class Isa { Scalar, Avx2, Neon };

const char* isa_name(Isa isa);
// Widest variant compiled in and supported by this CPU.
Isa best_isa();
// Variant used by the dispatching entry points. Defaults to best_isa().
Isa active_isa();
// Force a variant (tests, benchmarking). Falls back to Scalar if unsupported.
void set_active_isa(Isa isa);
bool isa_available(Isa isa);

// Bias and its theta-derivative at n values of theta sharing one angle vector.
// cx/sx hold cos/sin of the 2L angles; ct/st hold cos/sin of each theta.
struct BiasBatch {
    SchemeKind scheme;
    const double* cx;
    const double* sx;
    std::size_t nangles;
    const double* ct;
    const double* st;
    std::size_t n;
};

void bias_batch(const BiasBatch& in, double* value, double* deriv);
void bias_batch_scalar(const BiasBatch& in, double* value, double* deriv);
void bias_batch_avx2(const BiasBatch& in, double* value, double* deriv);
void bias_batch_neon(const BiasBatch& in, double* value, double* deriv);

// Maximum over L in [l_min, l_max] of the Chebyshev inverse-variance rate
//   R = V / (m (1 - sigma^2 V)),  V = m^2 sin^2(m mu) / (sin^2(m mu) + g_m - 1),  m = 2L+1,
// with g_m = exp(lambda m + m^2 sigma^2) (no SPAM term). sin(m mu) advances by the
// angle-addition recurrence, seeded from s0 = sin(m_min mu), c0 = cos(m_min mu),
// s2 = sin(2 mu), c2 = cos(2 mu).
struct ClfRateBatch {
    const double* s0;
    const double* c0;
    const double* s2;
    const double* c2;
    std::size_t n;
    int l_min;
    int l_max;
    double sigma;
    double lambda;
};

void clf_rate_max(const ClfRateBatch& in, double* out);
void clf_rate_max_scalar(const ClfRateBatch& in, double* out);
void clf_rate_max_avx2(const ClfRateBatch& in, double* out);
void clf_rate_max_neon(const ClfRateBatch& in, double* out);

}  // namespace elf::kernels
