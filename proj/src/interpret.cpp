#include "invnet/interpret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "invnet/error.hpp"

namespace invnet {

LinearBoundary::LinearBoundary(Vector w, double b) : w_(std::move(w)), b_(b) {
    if (w_.empty()) throw DimensionError("LinearBoundary: empty weight vector");
    if (!all_finite(w_) || !std::isfinite(b_)) throw InputError("LinearBoundary: non-finite");
    if (norm2(w_) == 0.0) throw DegenerateError("LinearBoundary: w = 0 has no decision boundary");
}

LinearBoundary feature_boundary(const InvNetModel& model) { return {model.w, model.b}; }

std::vector<std::size_t> ImportanceRanking::ranks() const {
    std::vector<std::size_t> r(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) r[order[k]] = k + 1;
    return r;
}

Vector project_to_boundary(const LinearBoundary& boundary, std::span<const double> x) {
    const Vector& w = boundary.w();
    require_same_length(w, x, "project_to_boundary");
    const double nw = norm2(w);
    // Work with the unit normal so that large |w| does not square out of range.
    const Vector u = scaled(w, 1.0 / nw);
    const double offset = dot(u, x) + boundary.b() / nw;
    Vector xp(x.begin(), x.end());
    axpy(-offset, u, xp);
    return xp;
}

Explanation explain_linear(const LinearBoundary& boundary, std::span<const double> x) {
    Explanation e;
    e.x.assign(x.begin(), x.end());
    e.x_p = project_to_boundary(boundary, x);
    e.explanation = subtract(e.x, e.x_p);
    e.importance = elementwise_mul(boundary.w(), e.explanation);
    for (double& v : e.importance) v = std::abs(v);
    return e;
}

Explanation explain_network(const InvNetModel& model, std::span<const double> x) {
    const LinearBoundary boundary = feature_boundary(model);
    const Vector z = transform(model, x);
    const Vector z_p = project_to_boundary(boundary, z);
    Explanation e;
    e.x.assign(x.begin(), x.end());
    e.x_p = inverse_transform(model, z_p);
    e.explanation = subtract(e.x, e.x_p);
    e.importance = elementwise_mul(input_gradient(model, x), e.explanation);
    for (double& v : e.importance) v = std::abs(v);
    return e;
}

std::vector<Explanation> explain_dataset(const InvNetModel& model, const LabeledDataset& data,
                                         unsigned threads) {
    if (data.dim() != model.input_dim) {
        throw DimensionError("explain_dataset: model expects " + std::to_string(model.input_dim) +
                             " features, dataset has " + std::to_string(data.dim()));
    }
    feature_boundary(model);  // reject w = 0 before spawning work
    const std::size_t n = data.size();
    std::vector<Explanation> out(n);
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = explain_network(model, data.sample(i));
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < n; i += workers) {
                        out[i] = explain_network(model, data.sample(i));
                    }
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    return out;
}

ImportanceRanking rank_features(Vector mean_importance) {
    ImportanceRanking r;
    r.order.resize(mean_importance.size());
    std::iota(r.order.begin(), r.order.end(), std::size_t{0});
    std::stable_sort(r.order.begin(), r.order.end(), [&](std::size_t a, std::size_t b) {
        return mean_importance[a] > mean_importance[b];
    });
    r.mean_importance = std::move(mean_importance);
    return r;
}

ImportanceRanking mean_importance(std::span<const Explanation> explanations) {
    if (explanations.empty()) throw InputError("mean_importance: dataset is empty");
    const std::size_t d = explanations.front().importance.size();
    Vector sum(d, 0.0);
    for (const auto& e : explanations) {
        if (e.importance.size() != d) throw DimensionError("mean_importance: ragged explanations");
        for (std::size_t j = 0; j < d; ++j) sum[j] += e.importance[j];
    }
    for (double& v : sum) v /= static_cast<double>(explanations.size());
    return rank_features(std::move(sum));
}

ImportanceRanking mean_importance(const InvNetModel& model, const LabeledDataset& data,
                                  unsigned threads) {
    if (data.size() == 0) throw InputError("mean_importance: dataset is empty");
    const auto explanations = explain_dataset(model, data, threads);
    return mean_importance(explanations);
}

std::vector<std::size_t> select_top(const ImportanceRanking& ranking, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw InputError("select_top: fraction must lie in (0, 1], got " + std::to_string(fraction));
    }
    const std::size_t d = ranking.order.size();
    // Guard the ceil against representation error, e.g. 0.1 * 19900.
    const double raw = fraction * static_cast<double>(d);
    const double rounded = std::round(raw);
    const std::size_t count = std::abs(raw - rounded) < 1e-9 * std::max(1.0, raw)
                                  ? static_cast<std::size_t>(rounded)
                                  : static_cast<std::size_t>(std::ceil(raw));
    const std::size_t take = std::min(d, std::max<std::size_t>(count, d == 0 ? 0 : 1));
    return {ranking.order.begin(), ranking.order.begin() + static_cast<std::ptrdiff_t>(take)};
}

std::vector<Vector> boundary_segment(const LinearBoundary& boundary, std::size_t samples,
                                     const FeatureBox& box) {
    if (boundary.dim() != 2) {
        throw DimensionError("boundary curve: only 2-D feature domains are supported, got " +
                             std::to_string(boundary.dim()));
    }
    if (samples < 2) throw InputError("boundary curve: need at least 2 samples");
    if (!(box.max0 > box.min0 && box.max1 > box.min1)) throw InputError("boundary curve: empty box");

    const double w0 = boundary.w()[0];
    const double w1 = boundary.w()[1];
    const double nn = w0 * w0 + w1 * w1;
    // Point on the line nearest the origin, and the line direction.
    const double p0 = -boundary.b() * w0 / nn;
    const double p1 = -boundary.b() * w1 / nn;
    const double d0 = -w1;
    const double d1 = w0;

    // Liang-Barsky clip of p + s d against the box.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    auto clip = [&](double p, double d, double mn, double mx) {
        if (d == 0.0) {
            if (p < mn || p > mx) lo = 1.0, hi = 0.0;
            return;
        }
        double a = (mn - p) / d;
        double b = (mx - p) / d;
        if (a > b) std::swap(a, b);
        lo = std::max(lo, a);
        hi = std::min(hi, b);
    };
    clip(p0, d0, box.min0, box.max0);
    clip(p1, d1, box.min1, box.max1);
    std::vector<Vector> points;
    if (!(hi > lo)) return points;
    points.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double s = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
        Vector z{p0 + s * d0, p1 + s * d1};
        // Re-project to cancel the rounding in p + s d.
        points.push_back(project_to_boundary(boundary, z));
    }
    return points;
}

std::vector<Vector> invert_boundary_curve(const InvNetModel& model, std::size_t samples,
                                          const FeatureBox& box) {
    if (model.input_dim != 2 || model.feature_dim() != 2) {
        throw DimensionError("invert_boundary_curve: only 2-D models are supported, got " +
                             std::to_string(model.input_dim));
    }
    std::vector<Vector> curve;
    for (const Vector& z : boundary_segment(feature_boundary(model), samples, box)) {
        curve.push_back(inverse_transform(model, z));
    }
    return curve;
}

}  // namespace invnet
