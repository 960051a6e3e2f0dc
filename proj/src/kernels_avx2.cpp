// Compiled with -mavx2; only reached after a runtime CPU check.
#include "elf/kernels.hpp"
#include "kernels_detail.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace elf::kernels {

#if defined(__AVX2__)

namespace {

inline __m256d mul(__m256d a, __m256d b) { return _mm256_mul_pd(a, b); }
inline __m256d add(__m256d a, __m256d b) { return _mm256_add_pd(a, b); }
inline __m256d sub(__m256d a, __m256d b) { return _mm256_sub_pd(a, b); }

}  // namespace

void bias_batch_avx2(const BiasBatch& in, double* value, double* deriv) {
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= in.n; i += 4) {
        const __m256d c = _mm256_loadu_pd(in.ct + i), s = _mm256_loadu_pd(in.st + i);
        __m256d ar = _mm256_set1_pd(1.0), ai = _mm256_setzero_pd(), br = ai, bi = ai;
        __m256d dar = ai, dai = ai, dbr = ai, dbi = ai;
        for (std::size_t k = 0; k < in.nangles; k += 2) {
            const __m256d cx = _mm256_set1_pd(in.cx[k]), sx = _mm256_set1_pd(in.sx[k]);
            const __m256d p = mul(sx, c), q = mul(sx, s);
            const __m256d nar = add(add(mul(cx, ar), mul(p, ai)), mul(q, bi));
            const __m256d nai = sub(sub(mul(cx, ai), mul(p, ar)), mul(q, br));
            const __m256d nbr = sub(add(mul(q, ai), mul(cx, br)), mul(p, bi));
            const __m256d nbi = add(sub(mul(cx, bi), mul(q, ar)), mul(p, br));
            const __m256d ndar = add(add(add(mul(cx, dar), mul(p, dai)), mul(q, dbi)), sub(mul(p, bi), mul(q, ai)));
            const __m256d ndai = add(sub(sub(mul(cx, dai), mul(p, dar)), mul(q, dbr)), sub(mul(q, ar), mul(p, br)));
            const __m256d ndbr = add(sub(add(mul(q, dai), mul(cx, dbr)), mul(p, dbi)), add(mul(p, ai), mul(q, bi)));
            const __m256d ndbi = sub(add(sub(mul(cx, dbi), mul(q, dar)), mul(p, dbr)), add(mul(p, ar), mul(q, br)));
            ar = nar, ai = nai, br = nbr, bi = nbi;
            dar = ndar, dai = ndai, dbr = ndbr, dbi = ndbi;
            const __m256d vc = _mm256_set1_pd(in.cx[k + 1]), vs = _mm256_set1_pd(in.sx[k + 1]);
            __m256d t;
            t = add(mul(vc, ar), mul(vs, ai)), ai = sub(mul(vc, ai), mul(vs, ar)), ar = t;
            t = sub(mul(vc, br), mul(vs, bi)), bi = add(mul(vc, bi), mul(vs, br)), br = t;
            t = add(mul(vc, dar), mul(vs, dai)), dai = sub(mul(vc, dai), mul(vs, dar)), dar = t;
            t = sub(mul(vc, dbr), mul(vs, dbi)), dbi = add(mul(vc, dbi), mul(vs, dbr)), dbr = t;
        }
        if (in.scheme == SchemeKind::AB) {
            _mm256_storeu_pd(value + i, ar);
            _mm256_storeu_pd(deriv + i, dar);
            continue;
        }
        const __m256d pop = sub(add(mul(ar, ar), mul(ai, ai)), add(mul(br, br), mul(bi, bi)));
        const __m256d coh = add(mul(ar, br), mul(ai, bi));
        _mm256_storeu_pd(value + i, add(mul(c, pop), mul(mul(two, s), coh)));
        const __m256d cross = add(add(add(mul(ar, add(mul(c, dar), mul(s, dbr))), mul(ai, add(mul(c, dai), mul(s, dbi)))),
                                      mul(br, sub(mul(s, dar), mul(c, dbr)))),
                                  mul(bi, sub(mul(s, dai), mul(c, dbi))));
        _mm256_storeu_pd(deriv + i, add(mul(two, cross), sub(mul(mul(two, c), coh), mul(s, pop))));
    }
    if (i < in.n) {
        BiasBatch tail = in;
        tail.ct += i, tail.st += i, tail.n -= i;
        bias_batch_scalar(tail, value + i, deriv + i);
    }
}

void clf_rate_max_avx2(const ClfRateBatch& in, double* out) {
    const detail::ClfTerms t = detail::clf_terms(in);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d sig2 = _mm256_set1_pd(in.sigma * in.sigma);
    std::size_t i = 0;
    for (; i + 4 <= in.n; i += 4) {
        __m256d s = _mm256_loadu_pd(in.s0 + i), c = _mm256_loadu_pd(in.c0 + i);
        const __m256d s2 = _mm256_loadu_pd(in.s2 + i), c2 = _mm256_loadu_pd(in.c2 + i);
        __m256d best = _mm256_setzero_pd();
        for (std::size_t l = 0; l < t.m.size(); ++l) {
            const __m256d ss = mul(s, s);
            const __m256d v = _mm256_div_pd(mul(_mm256_set1_pd(t.msq[l]), ss), add(ss, _mm256_set1_pd(t.gm1[l])));
            const __m256d r = _mm256_div_pd(v, mul(_mm256_set1_pd(t.m[l]), sub(one, mul(sig2, v))));
            best = _mm256_max_pd(r, best);
            const __m256d ns = add(mul(s, c2), mul(c, s2));
            c = sub(mul(c, c2), mul(s, s2));
            s = ns;
        }
        _mm256_storeu_pd(out + i, best);
    }
    if (i < in.n) {
        ClfRateBatch tail = in;
        tail.s0 += i, tail.c0 += i, tail.s2 += i, tail.c2 += i, tail.n -= i;
        clf_rate_max_scalar(tail, out + i);
    }
}

#else

void bias_batch_avx2(const BiasBatch& in, double* value, double* deriv) { bias_batch_scalar(in, value, deriv); }
void clf_rate_max_avx2(const ClfRateBatch& in, double* out) { clf_rate_max_scalar(in, out); }

#endif

}  // namespace elf::kernels
