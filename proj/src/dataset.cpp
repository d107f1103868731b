#include "invnet/dataset.hpp"

#include <algorithm>
#include <string>

#include "invnet/error.hpp"

namespace invnet {

std::size_t LabeledDataset::count_label(int label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void LabeledDataset::validate() const {
    const std::size_t n = size();
    if (labels.size() != n) {
        throw DimensionError("dataset: " + std::to_string(labels.size()) + " labels for " +
                             std::to_string(n) + " rows");
    }
    if (!ids.empty() && ids.size() != n) throw DimensionError("dataset: id count mismatch");
    if (!feature_names.empty() && feature_names.size() != dim()) {
        throw DimensionError("dataset: feature name count mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != 0 && labels[i] != 1) {
            throw InputError("dataset: label of row " + std::to_string(i) + " is " +
                             std::to_string(labels[i]) + ", expected 0 or 1");
        }
    }
    if (!all_finite(features.values())) throw InputError("dataset: non-finite feature value");
    for (const auto& [name, values] : targets) {
        if (values.size() != n) throw DimensionError("dataset: target '" + name + "' length mismatch");
        if (!all_finite(values)) throw InputError("dataset: target '" + name + "' is not finite");
    }
    if (ground_truth_support) {
        for (std::size_t j : *ground_truth_support) {
            if (j >= dim()) throw DimensionError("dataset: support index out of range");
        }
    }
}

LabeledDataset LabeledDataset::subset_rows(std::span<const std::size_t> rows) const {
    LabeledDataset out;
    out.features = Matrix(rows.size(), dim());
    out.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= size()) throw DimensionError("subset_rows: row index out of range");
        std::copy_n(features.row(rows[i]).begin(), dim(), out.features.row(i).begin());
        out.labels.push_back(labels[rows[i]]);
        if (!ids.empty()) out.ids.push_back(ids[rows[i]]);
    }
    for (const auto& [name, values] : targets) {
        Vector t(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) t[i] = values[rows[i]];
        out.targets.emplace(name, std::move(t));
    }
    out.feature_names = feature_names;
    out.ground_truth_support = ground_truth_support;
    return out;
}

LabeledDataset LabeledDataset::subset_columns(std::span<const std::size_t> cols) const {
    LabeledDataset out;
    out.ids = ids;
    out.labels = labels;
    out.targets = targets;
    out.features = Matrix(size(), cols.size());
    for (std::size_t c : cols) {
        if (c >= dim()) throw DimensionError("subset_columns: column index out of range");
        if (!feature_names.empty()) out.feature_names.push_back(feature_names[c]);
    }
    for (std::size_t i = 0; i < size(); ++i) {
        const auto src = features.row(i);
        auto dst = out.features.row(i);
        for (std::size_t j = 0; j < cols.size(); ++j) dst[j] = src[cols[j]];
    }
    return out;
}

std::vector<std::string> sequential_ids(std::size_t n, const std::string& prefix) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
    return ids;
}

}  // namespace invnet
