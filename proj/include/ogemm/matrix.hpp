#pragma once

#include <cstddef>
#include <vector>

namespace ogemm {

// Dense row-major double matrix; the only matrix type in the project.
class Matrix {
  public:
    Matrix() = default;
    Matrix(size_t rows, size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
    double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row(size_t r) { return data_.data() + r * cols_; }
    const double* row(size_t r) const { return data_.data() + r * cols_; }

    bool operator==(const Matrix&) const = default;

  private:
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<double> data_;
};

// Exact product via the dispatched kernels; rows parallelized. The
// reference-arithmetic backend of the whole system.
Matrix multiply_exact(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

double max_abs(const Matrix& m);
bool all_finite(const Matrix& m);

}  // namespace ogemm
