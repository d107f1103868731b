#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "invnet/linalg.hpp"

namespace invnet {

struct SvrOptions {
    double lambda = 0.0;    // l2 penalty strength on the standardized weights
    double epsilon = 0.1;   // tube half-width in standardized target units
    std::size_t iterations = 1000;
    double step = 0.25;     // step at iteration t is step / sqrt(t)
    std::size_t checkpoint_every = 100;

    void validate() const;
};

struct SvrModel {
    Vector w;
    double b = 0.0;
    double lambda = 0.0;
    double epsilon = 0.0;  // tube half-width in original target units

    double predict(std::span<const double> x) const { return dot(w, x) + b; }
    Vector predict(const Matrix& x) const;
};

struct SvrFit {
    SvrModel model;
    // Objective of the averaged iterate at each checkpoint (standardized space).
    std::vector<double> objective_trace;
};

// Linear epsilon-insensitive regression with an l2 penalty:
//   (1/n) sum_i max(0, |<v, x_i> + c - y_i| - eps) + lambda ||v||^2
// on internally standardized features and target, minimized by full-batch
// subgradient descent with step / sqrt(t) steps. The returned weights are the
// t-weighted average of the iterates, with the standardization folded back
// into (w, b).
SvrFit svr_fit(const Matrix& x, std::span<const double> y, const SvrOptions& options);

}  // namespace invnet
