// Two-lane float64 variant for AArch64. Same operation order as the scalar path.
#include "elf/kernels.hpp"
#include "kernels_detail.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>
#endif

namespace elf::kernels {

#if defined(__aarch64__) && defined(__ARM_NEON)

namespace {

inline float64x2_t mul(float64x2_t a, float64x2_t b) { return vmulq_f64(a, b); }
inline float64x2_t add(float64x2_t a, float64x2_t b) { return vaddq_f64(a, b); }
inline float64x2_t sub(float64x2_t a, float64x2_t b) { return vsubq_f64(a, b); }

}  // namespace

void bias_batch_neon(const BiasBatch& in, double* value, double* deriv) {
    const float64x2_t two = vdupq_n_f64(2.0);
    std::size_t i = 0;
    for (; i + 2 <= in.n; i += 2) {
        const float64x2_t c = vld1q_f64(in.ct + i), s = vld1q_f64(in.st + i);
        float64x2_t ar = vdupq_n_f64(1.0), ai = vdupq_n_f64(0.0), br = ai, bi = ai;
        float64x2_t dar = ai, dai = ai, dbr = ai, dbi = ai;
        for (std::size_t k = 0; k < in.nangles; k += 2) {
            const float64x2_t cx = vdupq_n_f64(in.cx[k]), sx = vdupq_n_f64(in.sx[k]);
            const float64x2_t p = mul(sx, c), q = mul(sx, s);
            const float64x2_t nar = add(add(mul(cx, ar), mul(p, ai)), mul(q, bi));
            const float64x2_t nai = sub(sub(mul(cx, ai), mul(p, ar)), mul(q, br));
            const float64x2_t nbr = sub(add(mul(q, ai), mul(cx, br)), mul(p, bi));
            const float64x2_t nbi = add(sub(mul(cx, bi), mul(q, ar)), mul(p, br));
            const float64x2_t ndar = add(add(add(mul(cx, dar), mul(p, dai)), mul(q, dbi)), sub(mul(p, bi), mul(q, ai)));
            const float64x2_t ndai = add(sub(sub(mul(cx, dai), mul(p, dar)), mul(q, dbr)), sub(mul(q, ar), mul(p, br)));
            const float64x2_t ndbr = add(sub(add(mul(q, dai), mul(cx, dbr)), mul(p, dbi)), add(mul(p, ai), mul(q, bi)));
            const float64x2_t ndbi = sub(add(sub(mul(cx, dbi), mul(q, dar)), mul(p, dbr)), add(mul(p, ar), mul(q, br)));
            ar = nar, ai = nai, br = nbr, bi = nbi;
            dar = ndar, dai = ndai, dbr = ndbr, dbi = ndbi;
            const float64x2_t vc = vdupq_n_f64(in.cx[k + 1]), vs = vdupq_n_f64(in.sx[k + 1]);
            float64x2_t t;
            t = add(mul(vc, ar), mul(vs, ai)), ai = sub(mul(vc, ai), mul(vs, ar)), ar = t;
            t = sub(mul(vc, br), mul(vs, bi)), bi = add(mul(vc, bi), mul(vs, br)), br = t;
            t = add(mul(vc, dar), mul(vs, dai)), dai = sub(mul(vc, dai), mul(vs, dar)), dar = t;
            t = sub(mul(vc, dbr), mul(vs, dbi)), dbi = add(mul(vc, dbi), mul(vs, dbr)), dbr = t;
        }
        if (in.scheme == SchemeKind::AB) {
            vst1q_f64(value + i, ar);
            vst1q_f64(deriv + i, dar);
            continue;
        }
        const float64x2_t pop = sub(add(mul(ar, ar), mul(ai, ai)), add(mul(br, br), mul(bi, bi)));
        const float64x2_t coh = add(mul(ar, br), mul(ai, bi));
        vst1q_f64(value + i, add(mul(c, pop), mul(mul(two, s), coh)));
        const float64x2_t cross = add(add(add(mul(ar, add(mul(c, dar), mul(s, dbr))), mul(ai, add(mul(c, dai), mul(s, dbi)))),
                                          mul(br, sub(mul(s, dar), mul(c, dbr)))),
                                      mul(bi, sub(mul(s, dai), mul(c, dbi))));
        vst1q_f64(deriv + i, add(mul(two, cross), sub(mul(mul(two, c), coh), mul(s, pop))));
    }
    if (i < in.n) {
        BiasBatch tail = in;
        tail.ct += i, tail.st += i, tail.n -= i;
        bias_batch_scalar(tail, value + i, deriv + i);
    }
}

void clf_rate_max_neon(const ClfRateBatch& in, double* out) {
    const detail::ClfTerms t = detail::clf_terms(in);
    const float64x2_t one = vdupq_n_f64(1.0);
    const float64x2_t sig2 = vdupq_n_f64(in.sigma * in.sigma);
    std::size_t i = 0;
    for (; i + 2 <= in.n; i += 2) {
        float64x2_t s = vld1q_f64(in.s0 + i), c = vld1q_f64(in.c0 + i);
        const float64x2_t s2 = vld1q_f64(in.s2 + i), c2 = vld1q_f64(in.c2 + i);
        float64x2_t best = vdupq_n_f64(0.0);
        for (std::size_t l = 0; l < t.m.size(); ++l) {
            const float64x2_t ss = mul(s, s);
            const float64x2_t v = vdivq_f64(mul(vdupq_n_f64(t.msq[l]), ss), add(ss, vdupq_n_f64(t.gm1[l])));
            const float64x2_t r = vdivq_f64(v, mul(vdupq_n_f64(t.m[l]), sub(one, mul(sig2, v))));
            // r > best ? r : best, matching the scalar select
            best = vbslq_f64(vcgtq_f64(r, best), r, best);
            const float64x2_t ns = add(mul(s, c2), mul(c, s2));
            c = sub(mul(c, c2), mul(s, s2));
            s = ns;
        }
        vst1q_f64(out + i, best);
    }
    if (i < in.n) {
        ClfRateBatch tail = in;
        tail.s0 += i, tail.c0 += i, tail.s2 += i, tail.c2 += i, tail.n -= i;
        clf_rate_max_scalar(tail, out + i);
    }
}

#else

void bias_batch_neon(const BiasBatch& in, double* value, double* deriv) { bias_batch_scalar(in, value, deriv); }
void clf_rate_max_neon(const ClfRateBatch& in, double* out) { clf_rate_max_scalar(in, out); }

#endif

}  // namespace elf::kernels
