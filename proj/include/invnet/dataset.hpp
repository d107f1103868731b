#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "invnet/linalg.hpp"

namespace invnet {

// Feature matrix (one sample per row), binary labels, optional continuous
// targets keyed by name, and for synthetic data the indices of the features
// that actually carry signal.
struct LabeledDataset {
    std::vector<std::string> ids;
    std::vector<std::string> feature_names;  // empty means x0, x1, ...
    Matrix features;
    std::vector<int> labels;
    std::map<std::string, Vector> targets;
    std::optional<std::vector<std::size_t>> ground_truth_support;

    std::size_t size() const noexcept { return features.rows(); }
    std::size_t dim() const noexcept { return features.cols(); }
    std::span<const double> sample(std::size_t i) const { return features.row(i); }

    std::size_t count_label(int label) const;

    // Row counts agree, labels in {0, 1}, everything finite.
    void validate() const;

    // Rows in `rows`, in that order.
    LabeledDataset subset_rows(std::span<const std::size_t> rows) const;
    // Columns in `cols`, in that order; targets and labels unchanged.
    LabeledDataset subset_columns(std::span<const std::size_t> cols) const;
};

// Default ids "s0", "s1", ... for generated data.
std::vector<std::string> sequential_ids(std::size_t n, const std::string& prefix = "s");

}  // namespace invnet
