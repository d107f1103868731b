#include "invnet/svr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "invnet/error.hpp"

namespace invnet {

void SvrOptions::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("svr: lambda must be >= 0");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InputError("svr: epsilon must be >= 0");
    if (iterations == 0) throw InputError("svr: iterations must be >= 1");
    if (!(step > 0.0)) throw InputError("svr: step must be > 0");
    if (checkpoint_every == 0) throw InputError("svr: checkpoint_every must be >= 1");
}

Vector SvrModel::predict(const Matrix& x) const {
    Vector out = matvec(x, w);
    for (double& v : out) v += b;
    return out;
}

namespace {

struct Standardized {
    Matrix x;
    Vector y;
    Vector x_mean, x_scale;
    double y_mean = 0.0, y_scale = 1.0;
};

Standardized standardize(const Matrix& x, std::span<const double> y) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    Standardized s;
    s.x = x;
    s.x_mean.assign(d, 0.0);
    s.x_scale.assign(d, 1.0);
    for (std::size_t i = 0; i < n; ++i) axpy(1.0, x.row(i), s.x_mean);
    for (double& m : s.x_mean) m /= static_cast<double>(n);
    Vector var(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = x.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double c = row[j] - s.x_mean[j];
            var[j] += c * c;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        const double sd = std::sqrt(var[j] / static_cast<double>(n));
        // Constant columns stay at zero after centering.
        s.x_scale[j] = sd > 0.0 ? sd : 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto row = s.x.row(i);
        for (std::size_t j = 0; j < d; ++j) row[j] = (row[j] - s.x_mean[j]) / s.x_scale[j];
    }
    for (double v : y) s.y_mean += v;
    s.y_mean /= static_cast<double>(n);
    double yvar = 0.0;
    for (double v : y) yvar += (v - s.y_mean) * (v - s.y_mean);
    const double ysd = std::sqrt(yvar / static_cast<double>(n));
    s.y_scale = ysd > 0.0 ? ysd : 1.0;
    s.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.y[i] = (y[i] - s.y_mean) / s.y_scale;
    return s;
}

double objective(const Matrix& x, const Vector& y, const Vector& v, double c, double lambda,
                 double epsilon) {
    double loss = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double r = dot(x.row(i), v) + c - y[i];
        loss += std::max(0.0, std::abs(r) - epsilon);
    }
    return loss / static_cast<double>(x.rows()) + lambda * dot(v, v);
}

}  // namespace

SvrFit svr_fit(const Matrix& x, std::span<const double> y, const SvrOptions& options) {
    options.validate();
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (y.size() != n) {
        throw DimensionError("svr_fit: " + std::to_string(n) + " rows but " +
                             std::to_string(y.size()) + " targets");
    }
    if (n < 2) throw InputError("svr_fit: need at least 2 samples");
    if (d == 0) throw DimensionError("svr_fit: no features");
    if (!all_finite(y)) throw InputError("svr_fit: non-finite target");
    if (!all_finite(x.values())) throw InputError("svr_fit: non-finite feature");

    const Standardized s = standardize(x, y);
    const double inv_n = 1.0 / static_cast<double>(n);

    Vector v(d, 0.0);
    double c = 0.0;
    Vector v_avg(d, 0.0);
    double c_avg = 0.0;
    double weight_sum = 0.0;
    Vector grad(d);
    Vector sign(n);

    SvrFit fit;
    for (std::size_t t = 1; t <= options.iterations; ++t) {
        double g_c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = dot(s.x.row(i), v) + c - s.y[i];
            sign[i] = r > options.epsilon ? 1.0 : (r < -options.epsilon ? -1.0 : 0.0);
            g_c += sign[i];
        }
        grad = matvec_transposed(s.x, sign);
        for (std::size_t j = 0; j < d; ++j) grad[j] = grad[j] * inv_n + 2.0 * options.lambda * v[j];
        g_c *= inv_n;

        const double eta = options.step / std::sqrt(static_cast<double>(t));
        axpy(-eta, grad, v);
        c -= eta * g_c;

        // Iterate t enters the running average with weight t.
        weight_sum += static_cast<double>(t);
        const double mix = static_cast<double>(t) / weight_sum;
        for (std::size_t j = 0; j < d; ++j) v_avg[j] += mix * (v[j] - v_avg[j]);
        c_avg += mix * (c - c_avg);

        if (t % options.checkpoint_every == 0 || t == options.iterations) {
            fit.objective_trace.push_back(
                objective(s.x, s.y, v_avg, c_avg, options.lambda, options.epsilon));
        }
    }

    // Fold the standardization back: y = y_mean + y_scale * (<v, (x - mu)/sd> + c).
    SvrModel& m = fit.model;
    m.w.resize(d);
    m.b = s.y_mean + s.y_scale * c_avg;
    for (std::size_t j = 0; j < d; ++j) {
        m.w[j] = s.y_scale * v_avg[j] / s.x_scale[j];
        m.b -= m.w[j] * s.x_mean[j];
    }
    m.lambda = options.lambda;
    m.epsilon = options.epsilon * s.y_scale;
    return fit;
}

}  // namespace invnet
