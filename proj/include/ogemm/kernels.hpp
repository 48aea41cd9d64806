#pragma once

#include <cstddef>
#include <string_view>

namespace ogemm::kernels {

// Hot inner loops of the emulator, in scalar reference form and SIMD
// variants selected once at startup. All functions operate on contiguous
// row-major data and are single-threaded leaves; callers parallelize by
// splitting row ranges.
struct Ops {
    // c = a(m x k) * b(k x n); c is overwritten.
    void (*gemm)(const double* a, const double* b, double* c, size_t m,
                 size_t k, size_t n);
    double (*dot)(const double* x, const double* y, size_t n);
    double (*sum)(const double* x, size_t n);
    // For each target t: out[i] = levels[#(midpoints < t)], i.e. the level
    // nearest to t with ties resolved toward the lower level. `levels`
    // must be ascending and `midpoints` the n_levels-1 adjacent means.
    void (*nearest_level)(const double* targets, size_t n,
                          const double* levels, const double* midpoints,
                          size_t n_levels, double* out);
    const char* name;
};

enum class Isa { scalar, avx2 };

bool avx2_supported();

// Resolution order: OGEMM_SIMD env var ("scalar" | "avx2" | "auto"),
// then cpuid. Resolved once; stable for the process lifetime.
const Ops& active();
Isa active_isa();

// Direct access for equivalence tests and benchmarks. Requesting avx2 on
// a CPU without it throws.
const Ops& ops_for(Isa isa);

}  // namespace ogemm::kernels
