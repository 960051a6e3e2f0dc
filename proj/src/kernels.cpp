#include "elf/kernels.hpp"

#include <atomic>

namespace elf::kernels {

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
        default: return "scalar";
    }
}

bool isa_available(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(ELF_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(__aarch64__) && defined(__ARM_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa best_isa() {
    if (isa_available(Isa::Avx2)) return Isa::Avx2;
    if (isa_available(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

namespace {
std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{best_isa()};
    return isa;
}
}  // namespace

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) { active().store(isa_available(isa) ? isa : Isa::Scalar, std::memory_order_relaxed); }

void bias_batch(const BiasBatch& in, double* value, double* deriv) {
    switch (active_isa()) {
        case Isa::Avx2: bias_batch_avx2(in, value, deriv); return;
        case Isa::Neon: bias_batch_neon(in, value, deriv); return;
        default: bias_batch_scalar(in, value, deriv); return;
    }
}

void clf_rate_max(const ClfRateBatch& in, double* out) {
    switch (active_isa()) {
        case Isa::Avx2: clf_rate_max_avx2(in, out); return;
        case Isa::Neon: clf_rate_max_neon(in, out); return;
        default: clf_rate_max_scalar(in, out); return;
    }
}

}  // namespace elf::kernels
