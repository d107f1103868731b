#include "invnet/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "invnet/error.hpp"

namespace invnet {

namespace {

void require_even_count(std::size_t n, const char* what) {
    if (n < 2 || n % 2 != 0) {
        throw InputError(std::string(what) + ": n must be even and >= 2, got " + std::to_string(n));
    }
}

LabeledDataset empty_2d(std::size_t n) {
    LabeledDataset data;
    data.ids = sequential_ids(n);
    data.features = Matrix(n, 2);
    data.labels.assign(n, 0);
    return data;
}

}  // namespace

LabeledDataset two_moons(std::size_t n, double noise_sd, SeededRng& rng) {
    require_even_count(n, "two_moons");
    if (!(noise_sd >= 0.0)) throw InputError("two_moons: noise_sd must be >= 0");
    LabeledDataset data = empty_2d(n);
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = rng.uniform(0.0, std::numbers::pi);
        const bool upper = i < half;
        double x = upper ? std::cos(t) : 1.0 - std::cos(t);
        double y = upper ? std::sin(t) : 0.5 - std::sin(t);
        if (noise_sd > 0.0) {
            x += noise_sd * rng.normal();
            y += noise_sd * rng.normal();
        }
        data.features(i, 0) = x;
        data.features(i, 1) = y;
        data.labels[i] = upper ? 0 : 1;
    }
    return data;
}

LabeledDataset diagonal_clusters(std::size_t n, double separation, SeededRng& rng,
                                 double boundary_spread) {
    require_even_count(n, "diagonal_clusters");
    if (!(separation > 0.0)) throw InputError("diagonal_clusters: separation must be > 0");
    if (!(boundary_spread > 0.0)) throw InputError("diagonal_clusters: spread must be > 0");
    LabeledDataset data = empty_2d(n);
    const double r = 1.0 / std::numbers::sqrt2;
    const double offset = separation / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        const int label = i < n / 2 ? 0 : 1;
        const double along = (label == 1 ? offset : -offset) + rng.normal();
        const double across = boundary_spread * rng.normal();
        data.features(i, 0) = r * (along + across);
        data.features(i, 1) = r * (along - across);
        data.labels[i] = label;
    }
    return data;
}

LabeledDataset axis_clusters(std::size_t n, double separation, SeededRng& rng) {
    require_even_count(n, "axis_clusters");
    if (!(separation > 0.0)) throw InputError("axis_clusters: separation must be > 0");
    LabeledDataset data = empty_2d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int label = i < n / 2 ? 0 : 1;
        data.features(i, 0) = rng.normal();
        data.features(i, 1) = (label == 1 ? 0.5 : -0.5) * separation + rng.normal();
        data.labels[i] = label;
    }
    return data;
}

LabeledDataset sparse_signal_synth(std::size_t n, std::size_t d, std::size_t k, double noise_sd,
                                   SeededRng& rng) {
    if (n == 0) throw InputError("sparse_signal_synth: n must be >= 1");
    if (k == 0 || k > d) {
        throw InputError("sparse_signal_synth: need 1 <= k <= d, got k=" + std::to_string(k) +
                         ", d=" + std::to_string(d));
    }
    if (!(noise_sd >= 0.0)) throw InputError("sparse_signal_synth: noise_sd must be >= 0");

    SeededRng support_rng = rng.child("support");
    std::vector<std::size_t> perm = support_rng.permutation(d);
    std::vector<std::size_t> support(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(support.begin(), support.end());

    std::vector<double> sign(k), beta(k);
    for (std::size_t j = 0; j < k; ++j) {
        sign[j] = support_rng.uniform() < 0.5 ? -1.0 : 1.0;
        beta[j] = (support_rng.uniform() < 0.5 ? -1.0 : 1.0) * support_rng.uniform(0.5, 1.5);
    }

    LabeledDataset data;
    data.ids = sequential_ids(n);
    data.features = Matrix(n, d);
    data.labels.resize(n);
    Vector score(n);
    SeededRng sample_rng = rng.child("samples");
    for (std::size_t i = 0; i < n; ++i) {
        const int label = static_cast<int>(i % 2);
        data.labels[i] = label;
        auto row = data.features.row(i);
        for (double& v : row) v = sample_rng.normal();
        double target = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double v = (2.0 * label - 1.0) * sign[j] + noise_sd * sample_rng.normal();
            row[support[j]] = v;
            target += beta[j] * v;
        }
        score[i] = target + noise_sd * sample_rng.normal();
    }
    data.targets.emplace("score", std::move(score));
    data.ground_truth_support = std::move(support);
    return data;
}

}  // namespace invnet
