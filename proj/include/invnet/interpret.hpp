#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "invnet/dataset.hpp"
#include "invnet/network.hpp"

namespace invnet {

// Hyperplane {z : <w, z> + b = 0}. Construction rejects w = 0.
class LinearBoundary {
public:
    LinearBoundary(Vector w, double b);

    const Vector& w() const noexcept { return w_; }
    double b() const noexcept { return b_; }
    std::size_t dim() const noexcept { return w_.size(); }

    double score(std::span<const double> x) const { return dot(w_, x) + b_; }

private:
    Vector w_;
    double b_;
};

// The classifier head of a model as a feature-domain hyperplane.
LinearBoundary feature_boundary(const InvNetModel& model);

struct Explanation {
    Vector x;
    Vector x_p;          // projection of x onto the decision boundary
    Vector explanation;  // x - x_p
    Vector importance;   // |gradient (*) explanation|, entrywise, >= 0
};

struct ImportanceRanking {
    Vector mean_importance;
    // Feature indices by descending mean importance, ties by ascending index.
    std::vector<std::size_t> order;

    // 1-based rank of each feature (rank_of[order[k]] == k + 1).
    std::vector<std::size_t> ranks() const;
};

// Orthogonal projection X - (<w, X> + b) w / ||w||^2, which is the same
// point as X - <w/||w||, X> w/||w|| - b w/||w||^2.
Vector project_to_boundary(const LinearBoundary& boundary, std::span<const double> x);

// Explanation of a linear classifier: importance weights the explanation by w.
Explanation explain_linear(const LinearBoundary& boundary, std::span<const double> x);

// Projects T(x) in the feature domain, maps the projection back with T^-1,
// and weights x - x_p by the input gradient of the logit at x.
Explanation explain_network(const InvNetModel& model, std::span<const double> x);

// Explains every row; runs over up to `threads` workers (0 = hardware
// concurrency). Output order matches row order.
std::vector<Explanation> explain_dataset(const InvNetModel& model, const LabeledDataset& data,
                                         unsigned threads = 0);

ImportanceRanking rank_features(Vector mean_importance);

// Pooled mean of per-sample importance over all rows, summed in row order.
ImportanceRanking mean_importance(const InvNetModel& model, const LabeledDataset& data,
                                  unsigned threads = 0);
ImportanceRanking mean_importance(std::span<const Explanation> explanations);

// First ceil(fraction * d) entries of ranking.order, 0 < fraction <= 1.
std::vector<std::size_t> select_top(const ImportanceRanking& ranking, double fraction);

struct FeatureBox {
    double min0, max0, min1, max1;
};

// Samples the feature-domain line <w, z> + b = 0 clipped to `box` at
// `samples` evenly spaced points and maps each through T^-1. Only defined for
// 2-D feature domains. Returns an empty list when the line misses the box.
std::vector<Vector> invert_boundary_curve(const InvNetModel& model, std::size_t samples,
                                          const FeatureBox& box);

// The same clipped segment in the feature domain, before inversion.
std::vector<Vector> boundary_segment(const LinearBoundary& boundary, std::size_t samples,
                                     const FeatureBox& box);

}  // namespace invnet
