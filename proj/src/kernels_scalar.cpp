#include "ogemm/kernels.hpp"

namespace ogemm::kernels {

void gemm_scalar(const double* a, const double* b, double* c, size_t m,
                 size_t k, size_t n) {
    for (size_t i = 0; i < m; ++i) {
        double* ci = c + i * n;
        for (size_t j = 0; j < n; ++j) ci[j] = 0.0;
        const double* ai = a + i * k;
        for (size_t p = 0; p < k; ++p) {
            const double aip = ai[p];
            const double* bp = b + p * n;
            for (size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
        }
    }
}

double dot_scalar(const double* x, const double* y, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_scalar(const double* x, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

void nearest_level_scalar(const double* targets, size_t n,
                          const double* levels, const double* midpoints,
                          size_t n_levels, double* out) {
    const size_t n_mid = n_levels - 1;
    for (size_t i = 0; i < n; ++i) {
        const double t = targets[i];
        size_t idx = 0;
        for (size_t m = 0; m < n_mid; ++m) idx += (midpoints[m] < t) ? 1 : 0;
        out[i] = levels[idx];
    }
}

extern const Ops kScalarOps;
const Ops kScalarOps = {gemm_scalar, dot_scalar, sum_scalar,
                        nearest_level_scalar, "scalar"};

}  // namespace ogemm::kernels
