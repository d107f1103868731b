#include "invnet/metrics.hpp"

#include <cmath>
#include <string>

#include "invnet/error.hpp"

namespace invnet {

MetricsReport classification_metrics(std::span<const int> predicted, std::span<const int> actual) {
    if (predicted.size() != actual.size()) {
        throw InputError("classification_metrics: " + std::to_string(predicted.size()) +
                         " predictions for " + std::to_string(actual.size()) + " labels");
    }
    if (actual.empty()) throw InputError("classification_metrics: no samples");
    MetricsReport m;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const int p = predicted[i];
        const int a = actual[i];
        if ((p != 0 && p != 1) || (a != 0 && a != 1)) {
            throw InputError("classification_metrics: labels must be 0 or 1");
        }
        if (p == 1 && a == 1) ++m.true_positive;
        if (p == 1 && a == 0) ++m.false_positive;
        if (p == 0 && a == 0) ++m.true_negative;
        if (p == 0 && a == 1) ++m.false_negative;
    }
    const auto n = static_cast<double>(actual.size());
    m.accuracy = static_cast<double>(m.true_positive + m.true_negative) / n;
    const std::size_t pp = m.true_positive + m.false_positive;
    const std::size_t ap = m.true_positive + m.false_negative;
    m.precision_degenerate = pp == 0;
    m.recall_degenerate = ap == 0;
    m.precision = pp == 0 ? 0.0 : static_cast<double>(m.true_positive) / static_cast<double>(pp);
    m.recall = ap == 0 ? 0.0 : static_cast<double>(m.true_positive) / static_cast<double>(ap);
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

double correlation(std::span<const double> pred, std::span<const double> actual) {
    if (pred.size() != actual.size()) throw InputError("correlation: length mismatch");
    if (pred.size() < 2) throw InputError("correlation: need at least 2 values");
    const auto n = static_cast<double>(pred.size());
    double mp = 0.0, ma = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        mp += pred[i];
        ma += actual[i];
    }
    mp /= n;
    ma /= n;
    double spa = 0.0, spp = 0.0, saa = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double dp = pred[i] - mp;
        const double da = actual[i] - ma;
        spa += dp * da;
        spp += dp * dp;
        saa += da * da;
    }
    if (spp == 0.0 || saa == 0.0) throw DegenerateError("correlation: zero variance input");
    const double r = spa / std::sqrt(spp * saa);
    return std::fmax(-1.0, std::fmin(1.0, r));
}

double mean_squared_error(std::span<const double> pred, std::span<const double> actual) {
    if (pred.size() != actual.size()) throw InputError("mean_squared_error: length mismatch");
    if (pred.empty()) throw InputError("mean_squared_error: no values");
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double r = pred[i] - actual[i];
        s += r * r;
    }
    return s / static_cast<double>(pred.size());
}

double standardized_mean_difference(std::span<const double> values, std::span<const int> labels) {
    if (values.size() != labels.size()) throw InputError("standardized_mean_difference: length mismatch");
    double sum[2] = {0.0, 0.0};
    double sq[2] = {0.0, 0.0};
    std::size_t count[2] = {0, 0};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const int c = labels[i];
        if (c != 0 && c != 1) throw InputError("standardized_mean_difference: labels must be 0 or 1");
        sum[c] += values[i];
        ++count[c];
    }
    if (count[0] == 0 || count[1] == 0) {
        throw InputError("standardized_mean_difference: both classes must be present");
    }
    const double m0 = sum[0] / static_cast<double>(count[0]);
    const double m1 = sum[1] / static_cast<double>(count[1]);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - (labels[i] == 1 ? m1 : m0);
        sq[labels[i]] += d * d;
    }
    const double v0 = sq[0] / static_cast<double>(count[0]);
    const double v1 = sq[1] / static_cast<double>(count[1]);
    const double pooled = std::sqrt((v0 + v1) / 2.0);
    if (pooled == 0.0) throw DegenerateError("standardized_mean_difference: zero spread");
    return std::abs(m1 - m0) / pooled;
}

}  // namespace invnet
