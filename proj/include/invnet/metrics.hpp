#pragma once

#include <cstddef>
#include <span>

namespace invnet {

// Binary classification summary with class 1 as the positive class. A
// precision or recall whose denominator is zero is reported as 0 and flagged.
struct MetricsReport {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t true_negative = 0;
    std::size_t false_negative = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_degenerate = false;
    bool recall_degenerate = false;
};

MetricsReport classification_metrics(std::span<const int> predicted, std::span<const int> actual);

// Pearson correlation. Throws DegenerateError if either input is constant.
double correlation(std::span<const double> pred, std::span<const double> actual);

double mean_squared_error(std::span<const double> pred, std::span<const double> actual);

// |mean_1 - mean_0| / sqrt((var_0 + var_1) / 2) with population variances.
double standardized_mean_difference(std::span<const double> values, std::span<const int> labels);

}  // namespace invnet
