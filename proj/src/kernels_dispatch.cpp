#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ogemm/kernels.hpp"

namespace ogemm::kernels {

extern const Ops kScalarOps;
#if defined(__x86_64__) || defined(_M_X64)
extern const Ops kAvx2Ops;
#endif

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const Ops& resolve() {
    const char* env = std::getenv("OGEMM_SIMD");
    const std::string pick = env ? env : "auto";
    if (pick == "scalar") return kScalarOps;
#if defined(__x86_64__) || defined(_M_X64)
    if (pick == "avx2") {
        if (!avx2_supported())
            throw std::runtime_error("OGEMM_SIMD=avx2 but CPU lacks AVX2/FMA");
        return kAvx2Ops;
    }
    if (avx2_supported()) return kAvx2Ops;
#else
    if (pick == "avx2")
        throw std::runtime_error("OGEMM_SIMD=avx2 unsupported on this arch");
#endif
    return kScalarOps;
}

}  // namespace

const Ops& active() {
    static const Ops& ops = resolve();
    return ops;
}

Isa active_isa() {
    return std::string(active().name) == "avx2" ? Isa::avx2 : Isa::scalar;
}

const Ops& ops_for(Isa isa) {
    if (isa == Isa::scalar) return kScalarOps;
#if defined(__x86_64__) || defined(_M_X64)
    if (!avx2_supported())
        throw std::runtime_error("AVX2 kernels unavailable on this CPU");
    return kAvx2Ops;
#else
    throw std::runtime_error("AVX2 kernels unavailable on this arch");
#endif
}

}  // namespace ogemm::kernels
