#include "invnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "invnet/error.hpp"

namespace invnet {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows * cols) {
        throw DimensionError("matrix: " + std::to_string(values_.size()) + " values for a " +
                             std::to_string(rows) + "x" + std::to_string(cols) + " shape");
    }
}

Vector Matrix::column(std::size_t c) const {
    Vector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

void require_same_length(std::span<const double> a, std::span<const double> b, const char* what) {
    if (a.size() != b.size()) {
        throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()) + ")");
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vector elementwise_mul(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b, "elementwise_mul");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

double norm2(std::span<const double> a) {
    // Scaled accumulation so huge or tiny entries do not overflow/underflow.
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double s = 0.0;
    for (double v : a) {
        const double t = v / scale;
        s += t * t;
    }
    return scale * std::sqrt(s);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Vector add(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b, "add");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
    require_same_length(a, b, "subtract");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

Vector scaled(std::span<const double> a, double s) {
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
    return out;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw DimensionError("axpy: length mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vector matvec(const Matrix& m, std::span<const double> x) {
    if (x.size() != m.cols()) {
        throw DimensionError("matvec: matrix has " + std::to_string(m.cols()) +
                             " columns, vector has " + std::to_string(x.size()));
    }
    Vector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        double s = 0.0;
        for (std::size_t c = 0; c < row.size(); ++c) s += row[c] * x[c];
        out[r] = s;
    }
    return out;
}

Vector matvec_transposed(const Matrix& m, std::span<const double> x) {
    if (x.size() != m.rows()) {
        throw DimensionError("matvec_transposed: matrix has " + std::to_string(m.rows()) +
                             " rows, vector has " + std::to_string(x.size()));
    }
    Vector out(m.cols(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double xr = x[r];
        if (xr == 0.0) continue;
        const auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) out[c] += row[c] * xr;
    }
    return out;
}

bool all_finite(std::span<const double> a) {
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace invnet
