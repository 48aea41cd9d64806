#include "ogemm/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "ogemm/kernels.hpp"
#include "ogemm/parallel.hpp"

namespace ogemm {

Matrix Matrix::identity(size_t n) {
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix multiply_exact(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("multiply_exact: inner dimensions differ (" +
                                    std::to_string(a.cols()) + " vs " +
                                    std::to_string(b.rows()) + ")");
    Matrix c(a.rows(), b.cols());
    const auto& ops = kernels::active();
    const size_t k = a.cols(), n = b.cols();
    // Split rows; each output element is produced by exactly one chunk.
    parallel_for(a.rows(), [&](size_t r0, size_t r1) {
        ops.gemm(a.row(r0), b.data(), c.row(r0), r1 - r0, k, n);
    });
    return c;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
    return t;
}

double max_abs(const Matrix& m) {
    double v = 0.0;
    const double* p = m.data();
    const size_t n = m.rows() * m.cols();
    for (size_t i = 0; i < n; ++i) v = std::max(v, std::fabs(p[i]));
    return v;
}

bool all_finite(const Matrix& m) {
    const double* p = m.data();
    const size_t n = m.rows() * m.cols();
    for (size_t i = 0; i < n; ++i)
        if (!std::isfinite(p[i])) return false;
    return true;
}

}  // namespace ogemm
