#include "elf/kernels.hpp"
#include "kernels_detail.hpp"

namespace elf::kernels {

void bias_batch_scalar(const BiasBatch& in, double* value, double* deriv) {
    for (std::size_t i = 0; i < in.n; ++i) {
        const double c = in.ct[i], s = in.st[i];
        // psi = Q|0> and its theta-derivative, split into real and imaginary parts.
        double ar = 1.0, ai = 0.0, br = 0.0, bi = 0.0;
        double dar = 0.0, dai = 0.0, dbr = 0.0, dbi = 0.0;
        for (std::size_t k = 0; k < in.nangles; k += 2) {
            // U(theta; x) = cx I - i sx P(theta)
            const double cx = in.cx[k], sx = in.sx[k];
            const double p = sx * c, q = sx * s;
            const double nar = cx * ar + p * ai + q * bi;
            const double nai = cx * ai - p * ar - q * br;
            const double nbr = q * ai + cx * br - p * bi;
            const double nbi = -q * ar + cx * bi + p * br;
            const double ndar = (cx * dar + p * dai + q * dbi) + (p * bi - q * ai);
            const double ndai = (cx * dai - p * dar - q * dbr) + (q * ar - p * br);
            const double ndbr = (q * dai + cx * dbr - p * dbi) + (p * ai + q * bi);
            const double ndbi = (-q * dar + cx * dbi + p * dbr) - (p * ar + q * br);
            ar = nar, ai = nai, br = nbr, bi = nbi;
            dar = ndar, dai = ndai, dbr = ndbr, dbi = ndbi;
            // V(x) = diag(e^{-ix}, e^{ix})
            const double vc = in.cx[k + 1], vs = in.sx[k + 1];
            double t;
            t = vc * ar + vs * ai, ai = vc * ai - vs * ar, ar = t;
            t = vc * br - vs * bi, bi = vc * bi + vs * br, br = t;
            t = vc * dar + vs * dai, dai = vc * dai - vs * dar, dar = t;
            t = vc * dbr - vs * dbi, dbi = vc * dbi + vs * dbr, dbr = t;
        }
        if (in.scheme == SchemeKind::AB) {
            value[i] = ar;
            deriv[i] = dar;
            continue;
        }
        const double pop = (ar * ar + ai * ai) - (br * br + bi * bi);
        const double coh = ar * br + ai * bi;
        value[i] = c * pop + 2.0 * s * coh;
        const double cross = ar * (c * dar + s * dbr) + ai * (c * dai + s * dbi) + br * (s * dar - c * dbr) +
                             bi * (s * dai - c * dbi);
        deriv[i] = 2.0 * cross + (2.0 * c * coh - s * pop);
    }
}

void clf_rate_max_scalar(const ClfRateBatch& in, double* out) {
    const detail::ClfTerms t = detail::clf_terms(in);
    const double sig2 = in.sigma * in.sigma;
    for (std::size_t i = 0; i < in.n; ++i) {
        double s = in.s0[i], c = in.c0[i];
        const double s2 = in.s2[i], c2 = in.c2[i];
        double best = 0.0;
        for (std::size_t l = 0; l < t.m.size(); ++l) {
            const double ss = s * s;
            const double v = t.msq[l] * ss / (ss + t.gm1[l]);
            const double r = v / (t.m[l] * (1.0 - sig2 * v));
            best = r > best ? r : best;
            const double ns = s * c2 + c * s2;
            c = c * c2 - s * s2;
            s = ns;
        }
        out[i] = best;
    }
}

}  // namespace elf::kernels
