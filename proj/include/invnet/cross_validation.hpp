#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "invnet/dataset.hpp"
#include "invnet/svr.hpp"

namespace invnet {

// {0, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1}
std::vector<double> default_lambda_grid();

// Contiguous folds over a permutation: fold f holds order[f*n/k, (f+1)*n/k).
// Throws InputError when any fold would hold fewer than 2 rows.
std::vector<std::vector<std::size_t>> kfold_partition(std::span<const std::size_t> order,
                                                      std::size_t folds);

// One fit-and-evaluate step, in dataset row indices. inner_fold is nullopt
// for the refit on the whole outer training set.
struct SplitAudit {
    std::size_t outer_fold = 0;
    std::optional<std::size_t> inner_fold;
    double lambda = 0.0;
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> eval_rows;
};

struct NestedCvOptions {
    std::size_t folds = 10;
    std::size_t inner_folds = 5;
    std::vector<double> lambda_grid = default_lambda_grid();
    SvrOptions svr;  // lambda is overridden per fit
    std::uint64_t seed = 0;
    unsigned threads = 1;  // outer folds evaluated concurrently
    std::function<void(const SplitAudit&)> audit;

    void validate() const;
};

struct CvReport {
    std::vector<double> fold_mse;
    std::vector<double> fold_cor;
    // Held-out predictions were constant, so the correlation is reported as 0.
    std::vector<bool> fold_cor_degenerate;
    std::vector<double> chosen_lambdas;
    std::vector<std::size_t> fold_sizes;
    double mean_mse = 0.0;
    double mean_cor = 0.0;
    std::size_t feature_count = 0;
};

// Outer k-fold over a seeded shuffle; on each outer training set an inner
// k-fold over the grid picks lambda by lowest pooled inner MSE (ties go to the
// smaller lambda), then the SVR is refit on the full outer training set and
// scored on the held-out fold.
CvReport nested_cv(const LabeledDataset& data, const std::string& target_name,
                   const std::optional<std::vector<std::size_t>>& feature_subset,
                   const NestedCvOptions& options);

}  // namespace invnet
