#include "invnet/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "invnet/error.hpp"
#include "invnet/metrics.hpp"
#include "invnet/rng.hpp"

namespace invnet {

std::vector<double> default_lambda_grid() { return {0.0, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1}; }

std::vector<std::vector<std::size_t>> kfold_partition(std::span<const std::size_t> order,
                                                      std::size_t folds) {
    const std::size_t n = order.size();
    if (folds < 2) throw InputError("kfold: need at least 2 folds");
    if (n < 2 * folds) {
        throw InputError("kfold: " + std::to_string(n) + " rows cannot fill " +
                         std::to_string(folds) + " folds of at least 2 samples");
    }
    std::vector<std::vector<std::size_t>> out(folds);
    for (std::size_t f = 0; f < folds; ++f) {
        const std::size_t lo = f * n / folds;
        const std::size_t hi = (f + 1) * n / folds;
        out[f].assign(order.begin() + static_cast<std::ptrdiff_t>(lo),
                      order.begin() + static_cast<std::ptrdiff_t>(hi));
    }
    return out;
}

void NestedCvOptions::validate() const {
    if (folds < 2) throw InputError("nested_cv: folds must be >= 2");
    if (inner_folds < 2) throw InputError("nested_cv: inner_folds must be >= 2");
    if (lambda_grid.empty()) throw InputError("nested_cv: empty lambda grid");
    for (double l : lambda_grid) {
        if (!(l >= 0.0) || !std::isfinite(l)) throw InputError("nested_cv: lambdas must be >= 0");
    }
    svr.validate();
}

namespace {

struct Problem {
    Matrix x;  // selected columns only
    Vector y;
};

Matrix gather_rows(const Matrix& x, std::span<const std::size_t> rows) {
    Matrix out(rows.size(), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy_n(x.row(rows[i]).begin(), x.cols(), out.row(i).begin());
    }
    return out;
}

Vector gather(const Vector& v, std::span<const std::size_t> rows) {
    Vector out(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) out[i] = v[rows[i]];
    return out;
}

std::vector<std::size_t> complement(const std::vector<std::vector<std::size_t>>& parts,
                                    std::size_t skip) {
    std::vector<std::size_t> rows;
    for (std::size_t f = 0; f < parts.size(); ++f) {
        if (f != skip) rows.insert(rows.end(), parts[f].begin(), parts[f].end());
    }
    return rows;
}

struct FoldResult {
    double mse = 0.0;
    double cor = 0.0;
    bool cor_degenerate = false;
    double lambda = 0.0;
    std::size_t size = 0;
};

class AuditSink {
public:
    explicit AuditSink(const std::function<void(const SplitAudit&)>& fn) : fn_(fn) {}
    void operator()(const SplitAudit& a) {
        if (!fn_) return;
        std::lock_guard lock(mutex_);
        fn_(a);
    }

private:
    const std::function<void(const SplitAudit&)>& fn_;
    std::mutex mutex_;
};

Vector fit_and_predict(const Problem& p, std::span<const std::size_t> train,
                       std::span<const std::size_t> eval, SvrOptions svr, double lambda) {
    svr.lambda = lambda;
    const SvrFit fit = svr_fit(gather_rows(p.x, train), gather(p.y, train), svr);
    return fit.model.predict(gather_rows(p.x, eval));
}

FoldResult run_outer_fold(const Problem& p, const std::vector<std::vector<std::size_t>>& outer,
                          std::size_t fold, const NestedCvOptions& options, AuditSink& audit) {
    const std::vector<std::size_t> train = complement(outer, fold);
    const std::vector<std::size_t>& test = outer[fold];

    SeededRng inner_rng = SeededRng(options.seed).child("inner-" + std::to_string(fold));
    std::vector<std::size_t> shuffled = train;
    inner_rng.shuffle(std::span<std::size_t>(shuffled));
    const auto inner = kfold_partition(shuffled, options.inner_folds);

    std::vector<double> grid = options.lambda_grid;
    std::sort(grid.begin(), grid.end());
    double best_lambda = grid.front();
    double best_mse = std::numeric_limits<double>::infinity();
    for (double lambda : grid) {
        double sq = 0.0;
        std::size_t count = 0;
        for (std::size_t k = 0; k < inner.size(); ++k) {
            const std::vector<std::size_t> inner_train = complement(inner, k);
            audit({fold, k, lambda, inner_train, inner[k]});
            const Vector pred = fit_and_predict(p, inner_train, inner[k], options.svr, lambda);
            for (std::size_t i = 0; i < inner[k].size(); ++i) {
                const double r = pred[i] - p.y[inner[k][i]];
                sq += r * r;
            }
            count += inner[k].size();
        }
        const double mse = sq / static_cast<double>(count);
        if (mse < best_mse) {
            best_mse = mse;
            best_lambda = lambda;
        }
    }

    audit({fold, std::nullopt, best_lambda, train, test});
    const Vector pred = fit_and_predict(p, train, test, options.svr, best_lambda);
    const Vector actual = gather(p.y, test);
    FoldResult r;
    r.lambda = best_lambda;
    r.size = test.size();
    r.mse = mean_squared_error(pred, actual);
    try {
        r.cor = correlation(pred, actual);
    } catch (const DegenerateError&) {
        r.cor = 0.0;
        r.cor_degenerate = true;
    }
    return r;
}

}  // namespace

CvReport nested_cv(const LabeledDataset& data, const std::string& target_name,
                   const std::optional<std::vector<std::size_t>>& feature_subset,
                   const NestedCvOptions& options) {
    options.validate();
    data.validate();
    const auto target = data.targets.find(target_name);
    if (target == data.targets.end()) {
        throw InputError("nested_cv: unknown target '" + target_name + "'");
    }
    Problem p;
    if (feature_subset) {
        if (feature_subset->empty()) throw InputError("nested_cv: empty feature subset");
        for (std::size_t j : *feature_subset) {
            if (j >= data.dim()) {
                throw InputError("nested_cv: feature index " + std::to_string(j) +
                                 " out of range for " + std::to_string(data.dim()) + " features");
            }
        }
        p.x = data.subset_columns(*feature_subset).features;
    } else {
        p.x = data.features;
    }
    p.y = target->second;

    SeededRng outer_rng = SeededRng(options.seed).child("outer");
    const std::vector<std::size_t> order = outer_rng.permutation(data.size());
    const auto outer = kfold_partition(order, options.folds);
    for (std::size_t f = 0; f < outer.size(); ++f) {
        if (data.size() - outer[f].size() < 2 * options.inner_folds) {
            throw InputError("nested_cv: outer training set too small for inner folds");
        }
    }

    std::vector<FoldResult> results(options.folds);
    AuditSink audit(options.audit);
    const unsigned workers =
        static_cast<unsigned>(std::clamp<std::size_t>(options.threads, 1, options.folds));
    if (workers == 1) {
        for (std::size_t f = 0; f < options.folds; ++f) {
            results[f] = run_outer_fold(p, outer, f, options, audit);
        }
    } else {
        std::vector<std::exception_ptr> errors(workers);
        {
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < workers; ++t) {
                pool.emplace_back([&, t] {
                    try {
                        for (std::size_t f = t; f < options.folds; f += workers) {
                            results[f] = run_outer_fold(p, outer, f, options, audit);
                        }
                    } catch (...) {
                        errors[t] = std::current_exception();
                    }
                });
            }
        }
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    CvReport report;
    report.feature_count = p.x.cols();
    for (const auto& r : results) {
        report.fold_mse.push_back(r.mse);
        report.fold_cor.push_back(r.cor);
        report.fold_cor_degenerate.push_back(r.cor_degenerate);
        report.chosen_lambdas.push_back(r.lambda);
        report.fold_sizes.push_back(r.size);
    }
    double sm = 0.0, sc = 0.0;
    for (std::size_t f = 0; f < results.size(); ++f) {
        sm += report.fold_mse[f];
        sc += report.fold_cor[f];
    }
    report.mean_mse = sm / static_cast<double>(results.size());
    report.mean_cor = sc / static_cast<double>(results.size());
    return report;
}

}  // namespace invnet
