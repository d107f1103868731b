#include "invnet/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "invnet/error.hpp"

namespace invnet {

std::size_t upper_pair_count(std::size_t rois) { return rois < 2 ? 0 : rois * (rois - 1) / 2; }

std::size_t upper_pair_index(std::size_t i, std::size_t j, std::size_t rois) {
    if (!(i < j && j < rois)) throw DimensionError("upper_pair_index: need i < j < rois");
    // Pairs before row i: sum_{r<i} (rois - 1 - r)
    return i * (2 * rois - i - 1) / 2 + (j - i - 1);
}

std::pair<std::size_t, std::size_t> upper_pair(std::size_t index, std::size_t rois) {
    if (index >= upper_pair_count(rois)) throw DimensionError("upper_pair: index out of range");
    std::size_t i = 0;
    std::size_t row_len = rois - 1;
    while (index >= row_len) {
        index -= row_len;
        ++i;
        --row_len;
    }
    return {i, i + 1 + index};
}

Matrix pearson_connectivity(const TimeSeriesTable& ts) {
    const std::size_t t = ts.timepoints();
    const std::size_t r = ts.rois();
    if (t < 3) throw InputError("pearson_connectivity: need at least 3 timepoints, got " +
                                std::to_string(t));
    if (r == 0) throw InputError("pearson_connectivity: no ROI columns");

    // Column-major centered, unit-norm copies.
    std::vector<Vector> cols(r);
    for (std::size_t c = 0; c < r; ++c) {
        Vector col = ts.values.column(c);
        double mean = 0.0;
        double peak = 0.0;
        for (double v : col) {
            mean += v;
            peak = std::max(peak, std::abs(v));
        }
        mean /= static_cast<double>(t);
        for (double& v : col) v -= mean;
        const double norm = norm2(col);
        if (!(norm > 1e-12 * peak * std::sqrt(static_cast<double>(t))) || norm == 0.0) {
            const std::string name =
                c < ts.roi_names.size() ? ts.roi_names[c] : "column " + std::to_string(c);
            throw DegenerateError("pearson_connectivity: ROI '" + name + "' has zero variance");
        }
        for (double& v : col) v /= norm;
        cols[c] = std::move(col);
    }

    Matrix m(r, r);
    for (std::size_t i = 0; i < r; ++i) {
        m(i, i) = 1.0;
        for (std::size_t j = i + 1; j < r; ++j) {
            const double v = std::clamp(dot(cols[i], cols[j]), -1.0, 1.0);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

ConnectivityVector vectorize_upper(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw DimensionError("vectorize_upper: matrix is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected square");
    }
    const std::size_t r = m.rows();
    ConnectivityVector out;
    out.roi_count = r;
    out.values.reserve(upper_pair_count(r));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = i + 1; j < r; ++j) out.values.push_back(m(i, j));
    }
    return out;
}

Matrix matricize_upper(const ConnectivityVector& v) {
    const std::size_t r = v.roi_count;
    if (v.values.size() != upper_pair_count(r)) {
        throw DimensionError("matricize_upper: " + std::to_string(v.values.size()) +
                             " values do not fill the upper triangle of " + std::to_string(r) +
                             " ROIs");
    }
    Matrix m(r, r);
    std::size_t k = 0;
    for (std::size_t i = 0; i < r; ++i) {
        m(i, i) = 1.0;
        for (std::size_t j = i + 1; j < r; ++j) {
            m(i, j) = v.values[k];
            m(j, i) = v.values[k];
            ++k;
        }
    }
    return m;
}

std::vector<ConnectivityVector> bootstrap_connectivity(const TimeSeriesTable& ts,
                                                       std::size_t copies,
                                                       std::size_t block_len, SeededRng& rng) {
    const std::size_t t = ts.timepoints();
    if (copies == 0) throw InputError("bootstrap_connectivity: copies must be >= 1");
    if (block_len < 2) throw InputError("bootstrap_connectivity: block_len must be >= 2");
    if (block_len > t) {
        throw InputError("bootstrap_connectivity: block_len " + std::to_string(block_len) +
                         " exceeds the " + std::to_string(t) + " available timepoints");
    }
    std::vector<ConnectivityVector> out;
    out.reserve(copies);
    const std::size_t start_choices = t - block_len + 1;
    for (std::size_t c = 0; c < copies; ++c) {
        TimeSeriesTable resampled{ts.roi_names, Matrix(t, ts.rois())};
        std::size_t row = 0;
        while (row < t) {
            const std::size_t start = rng.below(start_choices);
            for (std::size_t k = 0; k < block_len && row < t; ++k, ++row) {
                const auto src = ts.values.row(start + k);
                std::copy(src.begin(), src.end(), resampled.values.row(row).begin());
            }
        }
        out.push_back(vectorize_upper(pearson_connectivity(resampled)));
    }
    return out;
}

}  // namespace invnet
