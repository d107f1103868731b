#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "invnet/linalg.hpp"
#include "invnet/rng.hpp"

namespace invnet {

// T x R table of ROI mean time series, one column per ROI.
struct TimeSeriesTable {
    std::vector<std::string> roi_names;
    Matrix values;

    std::size_t timepoints() const noexcept { return values.rows(); }
    std::size_t rois() const noexcept { return values.cols(); }
};

// Strict upper triangle of an R x R connectivity matrix. Pairs are ordered
// row-major: (0,1), (0,2), ..., (0,R-1), (1,2), ..., (R-2,R-1). Biomarker
// indices refer to this order.
struct ConnectivityVector {
    Vector values;
    std::size_t roi_count = 0;
};

std::size_t upper_pair_count(std::size_t rois);
// Zero-based (i, j), i < j, of the pair stored at `index`.
std::pair<std::size_t, std::size_t> upper_pair(std::size_t index, std::size_t rois);
std::size_t upper_pair_index(std::size_t i, std::size_t j, std::size_t rois);

// R x R Pearson correlation matrix of the columns. Symmetric, unit diagonal,
// entries clamped to [-1, 1]. A constant column is a DegenerateError that
// names the ROI.
Matrix pearson_connectivity(const TimeSeriesTable& ts);

ConnectivityVector vectorize_upper(const Matrix& m);
// Symmetric matrix with unit diagonal whose strict upper triangle is `v`.
Matrix matricize_upper(const ConnectivityVector& v);

// Moving-block bootstrap over timepoints: each copy concatenates random
// contiguous blocks of `block_len` rows (starts uniform in [0, T - block_len]),
// truncated to T rows, then correlates and vectorizes.
std::vector<ConnectivityVector> bootstrap_connectivity(const TimeSeriesTable& ts,
                                                       std::size_t copies,
                                                       std::size_t block_len, SeededRng& rng);

}  // namespace invnet
