#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace invnet {

using Vector = std::vector<double>;

// Dense row-major matrix. Row-major order is part of the model file format.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return values_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

    std::vector<double>& values() noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    Vector column(std::size_t c) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

double dot(std::span<const double> a, std::span<const double> b);
Vector elementwise_mul(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

Vector add(std::span<const double> a, std::span<const double> b);
Vector subtract(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> a, double s);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// m * x
Vector matvec(const Matrix& m, std::span<const double> x);
// m^T * x
Vector matvec_transposed(const Matrix& m, std::span<const double> x);

bool all_finite(std::span<const double> a);

// Throws DimensionError when the lengths differ; `what` names the call site.
void require_same_length(std::span<const double> a, std::span<const double> b, const char* what);

}  // namespace invnet
