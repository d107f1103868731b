#include "invnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "invnet/error.hpp"

namespace invnet {

namespace {

double relu(double v) { return v > 0.0 ? v : 0.0; }

struct SubnetTrace {
    Vector a1;  // first pre-activation
    Vector h;   // relu(a1)
    Vector a2;  // second pre-activation
};

Vector subnet_forward(const Subnet& net, std::span<const double> x, SubnetTrace* trace) {
    Vector a1 = matvec(net.w1, x);
    for (std::size_t i = 0; i < a1.size(); ++i) a1[i] += net.b1[i];
    Vector h(a1.size());
    for (std::size_t i = 0; i < a1.size(); ++i) h[i] = relu(a1[i]);
    Vector a2 = matvec(net.w2, h);
    for (std::size_t i = 0; i < a2.size(); ++i) a2[i] += net.b2[i];
    Vector out(a2.size());
    for (std::size_t i = 0; i < a2.size(); ++i) out[i] = relu(a2[i]);
    if (trace) {
        trace->a1 = std::move(a1);
        trace->h = std::move(h);
        trace->a2 = std::move(a2);
    }
    return out;
}

// Returns d/dx of <grad_out, net(x)>; adds scale-free parameter gradients into
// `param_grad` when given.
Vector subnet_backward(const Subnet& net, std::span<const double> x, const SubnetTrace& trace,
                       std::span<const double> grad_out, Subnet* param_grad) {
    Vector g_a2(grad_out.size());
    for (std::size_t i = 0; i < g_a2.size(); ++i) g_a2[i] = trace.a2[i] > 0.0 ? grad_out[i] : 0.0;
    Vector g_h = matvec_transposed(net.w2, g_a2);
    Vector g_a1(g_h.size());
    for (std::size_t i = 0; i < g_a1.size(); ++i) g_a1[i] = trace.a1[i] > 0.0 ? g_h[i] : 0.0;
    if (param_grad) {
        for (std::size_t r = 0; r < g_a2.size(); ++r) {
            if (g_a2[r] == 0.0) continue;
            axpy(g_a2[r], trace.h, param_grad->w2.row(r));
            param_grad->b2[r] += g_a2[r];
        }
        for (std::size_t r = 0; r < g_a1.size(); ++r) {
            if (g_a1[r] == 0.0) continue;
            axpy(g_a1[r], x, param_grad->w1.row(r));
            param_grad->b1[r] += g_a1[r];
        }
    }
    return matvec_transposed(net.w1, g_a1);
}

struct BlockTrace {
    Vector x1;
    Vector y2;
    SubnetTrace f;
    SubnetTrace g;
};

void require_even(std::size_t n, std::size_t half, const char* what) {
    if (n != 2 * half) {
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(2 * half) +
                             ", got " + std::to_string(n));
    }
}

Vector block_forward_traced(const CouplingBlock& block, std::span<const double> x,
                            BlockTrace* trace) {
    const std::size_t half = block.half_dim();
    require_even(x.size(), half, "block_forward");
    const auto x1 = x.first(half);
    const auto x2 = x.subspan(half);
    Vector y2 = add(x2, subnet_forward(block.f, x1, trace ? &trace->f : nullptr));
    Vector y1 = add(x1, subnet_forward(block.g, y2, trace ? &trace->g : nullptr));
    Vector y;
    y.reserve(2 * half);
    y.insert(y.end(), y1.begin(), y1.end());
    y.insert(y.end(), y2.begin(), y2.end());
    if (trace) {
        trace->x1.assign(x1.begin(), x1.end());
        trace->y2 = std::move(y2);
    }
    return y;
}

// Pulls d/dy back through one block to d/dx.
Vector block_backward(const CouplingBlock& block, const BlockTrace& trace,
                      std::span<const double> grad_y, CouplingBlock* param_grad) {
    const std::size_t half = block.half_dim();
    const auto g_y1 = grad_y.first(half);
    const auto g_y2 = grad_y.subspan(half);
    // y1 = x1 + G(y2)
    Vector g_y2_total = add(g_y2, subnet_backward(block.g, trace.y2, trace.g, g_y1,
                                                  param_grad ? &param_grad->g : nullptr));
    // y2 = x2 + F(x1)
    Vector g_x1 = add(g_y1, subnet_backward(block.f, trace.x1, trace.f, g_y2_total,
                                            param_grad ? &param_grad->f : nullptr));
    Vector g_x;
    g_x.reserve(2 * half);
    g_x.insert(g_x.end(), g_x1.begin(), g_x1.end());
    g_x.insert(g_x.end(), g_y2_total.begin(), g_y2_total.end());
    return g_x;
}

void check_input(const InvNetModel& model, std::span<const double> x, const char* what) {
    if (x.size() != model.input_dim) {
        throw DimensionError(std::string(what) + ": model expects " +
                             std::to_string(model.input_dim) + " features, got " +
                             std::to_string(x.size()));
    }
}

// Output biases start at 1 so the final ReLU begins active on every input. At
// zero, a subnet with a 1-D output is easily pushed entirely below the kink
// during training, after which it is constant and receives no gradient.
constexpr double kOutputBiasInit = 1.0;

Subnet random_subnet(std::size_t half, std::size_t hidden, SeededRng& rng) {
    Subnet net = Subnet::zeros(half, hidden);
    const double s = std::sqrt(6.0 / static_cast<double>(half + hidden));
    for (double& v : net.w1.values()) v = rng.uniform(-s, s);
    for (double& v : net.w2.values()) v = rng.uniform(-s, s);
    std::fill(net.b2.begin(), net.b2.end(), kOutputBiasInit);
    return net;
}

}  // namespace

Subnet Subnet::zeros(std::size_t half_dim, std::size_t hidden_dim) {
    return Subnet{Matrix(hidden_dim, half_dim), Vector(hidden_dim, 0.0), Matrix(half_dim, hidden_dim),
                  Vector(half_dim, 0.0)};
}

Vector Subnet::operator()(std::span<const double> x) const {
    if (x.size() != half_dim()) {
        throw DimensionError("subnet: expected length " + std::to_string(half_dim()) + ", got " +
                             std::to_string(x.size()));
    }
    return subnet_forward(*this, x, nullptr);
}

void Subnet::validate() const {
    const std::size_t half = half_dim();
    const std::size_t hidden = hidden_dim();
    if (half == 0 || hidden == 0) throw DimensionError("subnet: empty layer");
    if (b1.size() != hidden || w2.rows() != half || w2.cols() != hidden || b2.size() != half) {
        throw DimensionError("subnet: inconsistent layer shapes");
    }
    if (!all_finite(w1.values()) || !all_finite(b1) || !all_finite(w2.values()) ||
        !all_finite(b2)) {
        throw InputError("subnet: non-finite parameter");
    }
}

Vector block_forward(const CouplingBlock& block, std::span<const double> x) {
    return block_forward_traced(block, x, nullptr);
}

Vector block_inverse(const CouplingBlock& block, std::span<const double> y) {
    const std::size_t half = block.half_dim();
    require_even(y.size(), half, "block_inverse");
    const auto y1 = y.first(half);
    const auto y2 = y.subspan(half);
    Vector x1 = subtract(y1, block.g(y2));
    Vector x2 = subtract(y2, block.f(x1));
    x1.insert(x1.end(), x2.begin(), x2.end());
    return x1;
}

void InvNetModel::validate() const {
    if (input_dim == 0) throw DimensionError("model: input_dim must be positive");
    if (padded != (input_dim % 2 == 1)) {
        throw InputError("model: padded flag must be set exactly when input_dim is odd");
    }
    if (blocks.empty()) throw InputError("model: at least one coupling block is required");
    const std::size_t half = half_dim();
    const std::size_t hidden = hidden_dim();
    for (const auto& block : blocks) {
        block.f.validate();
        block.g.validate();
        if (block.f.half_dim() != half || block.g.half_dim() != half) {
            throw DimensionError("model: block half_dim does not match feature_dim / 2");
        }
        if (block.f.hidden_dim() != hidden || block.g.hidden_dim() != hidden) {
            throw DimensionError("model: blocks disagree on hidden_dim");
        }
    }
    if (w.size() != feature_dim()) {
        throw DimensionError("model: classifier has " + std::to_string(w.size()) +
                             " weights, feature domain has " + std::to_string(feature_dim()));
    }
    if (!all_finite(w) || !std::isfinite(b)) throw InputError("model: non-finite classifier");
    if (padded) {
        const std::size_t last = half - 1;
        bool pinned = w.back() == 0.0;
        for (const auto& block : blocks) {
            pinned = pinned && block.f.b2[last] == 0.0;
            for (double v : block.f.w2.row(last)) pinned = pinned && v == 0.0;
        }
        if (!pinned) throw InputError("model: padding parameters must be zero");
    }
}

InvNetModel make_identity_model(std::size_t input_dim, std::size_t num_blocks,
                                std::size_t hidden_dim, Vector w, double b) {
    InvNetModel model;
    model.input_dim = input_dim;
    model.padded = input_dim % 2 == 1;
    const std::size_t half = model.half_dim();
    for (std::size_t i = 0; i < num_blocks; ++i) {
        model.blocks.push_back({Subnet::zeros(half, hidden_dim), Subnet::zeros(half, hidden_dim)});
    }
    if (model.padded && w.size() == input_dim) w.push_back(0.0);
    model.w = std::move(w);
    model.b = b;
    model.validate();
    return model;
}

InvNetModel initialize_model(std::size_t input_dim, std::size_t num_blocks,
                             std::size_t hidden_dim, SeededRng& rng) {
    if (input_dim == 0 || num_blocks == 0 || hidden_dim == 0) {
        throw InputError("initialize_model: dimensions and block count must be positive");
    }
    InvNetModel model;
    model.input_dim = input_dim;
    model.padded = input_dim % 2 == 1;
    const std::size_t half = model.half_dim();
    for (std::size_t i = 0; i < num_blocks; ++i) {
        CouplingBlock block;
        block.f = random_subnet(half, hidden_dim, rng);
        block.g = random_subnet(half, hidden_dim, rng);
        model.blocks.push_back(std::move(block));
    }
    const double s = std::sqrt(6.0 / static_cast<double>(model.feature_dim() + 1));
    model.w.resize(model.feature_dim());
    for (double& v : model.w) v = rng.uniform(-s, s);
    model.b = 0.0;
    apply_padding_mask(model);
    return model;
}

void apply_padding_mask(InvNetModel& model) {
    if (!model.padded) return;
    const std::size_t last = model.half_dim() - 1;
    for (auto& block : model.blocks) {
        block.f.b2[last] = 0.0;
        for (double& v : block.f.w2.row(last)) v = 0.0;
    }
    model.w.back() = 0.0;
}

Vector pad_input(const InvNetModel& model, std::span<const double> x) {
    check_input(model, x, "pad_input");
    Vector z(x.begin(), x.end());
    if (model.padded) z.push_back(0.0);
    return z;
}

Vector transform(const InvNetModel& model, std::span<const double> x) {
    Vector z = pad_input(model, x);
    for (const auto& block : model.blocks) z = block_forward(block, z);
    return z;
}

Vector inverse_transform(const InvNetModel& model, std::span<const double> z) {
    if (z.size() != model.feature_dim()) {
        throw DimensionError("inverse_transform: feature domain has " +
                             std::to_string(model.feature_dim()) + " dimensions, got " +
                             std::to_string(z.size()));
    }
    Vector x(z.begin(), z.end());
    for (auto it = model.blocks.rbegin(); it != model.blocks.rend(); ++it) {
        x = block_inverse(*it, x);
    }
    if (model.padded) x.pop_back();
    return x;
}

double logit(const InvNetModel& model, std::span<const double> x) {
    return dot(model.w, transform(model, x)) + model.b;
}

int predict_class(const InvNetModel& model, std::span<const double> x) {
    return logit(model, x) > 0.0 ? 1 : 0;
}

namespace {

// Forward with traces, then reverse-mode from d(logit)/dz = w.
Vector logit_backward(const InvNetModel& model, std::span<const double> x, InvNetModel* grad,
                      double scale, double* logit_out) {
    Vector z = pad_input(model, x);
    std::vector<BlockTrace> traces(model.blocks.size());
    for (std::size_t i = 0; i < model.blocks.size(); ++i) {
        z = block_forward_traced(model.blocks[i], z, &traces[i]);
    }
    if (logit_out) *logit_out = dot(model.w, z) + model.b;
    if (grad) {
        axpy(scale, z, grad->w);
        grad->b += scale;
    }
    Vector g = scaled(model.w, scale);
    for (std::size_t i = model.blocks.size(); i-- > 0;) {
        g = block_backward(model.blocks[i], traces[i], g, grad ? &grad->blocks[i] : nullptr);
    }
    if (model.padded) g.pop_back();
    return g;
}

}  // namespace

Vector input_gradient(const InvNetModel& model, std::span<const double> x) {
    return logit_backward(model, x, nullptr, 1.0, nullptr);
}

double accumulate_parameter_gradient(const InvNetModel& model, std::span<const double> x,
                                     double scale, InvNetModel& grad) {
    double l = 0.0;
    logit_backward(model, x, &grad, scale, &l);
    return l;
}

InvNetModel zeros_like(const InvNetModel& model) {
    InvNetModel z = model;
    for_each_parameter(z, [](std::vector<double>& values) {
        std::fill(values.begin(), values.end(), 0.0);
    });
    z.b = 0.0;
    return z;
}

double min_relu_margin(const InvNetModel& model, std::span<const double> x) {
    double margin = std::numeric_limits<double>::infinity();
    Vector z = pad_input(model, x);
    for (const auto& block : model.blocks) {
        BlockTrace trace;
        z = block_forward_traced(block, z, &trace);
        for (const SubnetTrace* t : {&trace.f, &trace.g}) {
            for (double v : t->a1) margin = std::min(margin, std::abs(v));
            // The pinned padding output of F is identically zero; not a kink.
            const std::size_t skip = (model.padded && t == &trace.f) ? t->a2.size() - 1 : t->a2.size();
            for (std::size_t i = 0; i < t->a2.size(); ++i) {
                if (i != skip) margin = std::min(margin, std::abs(t->a2[i]));
            }
        }
    }
    return margin;
}

std::size_t parameter_count(const InvNetModel& model) {
    std::size_t n = 1;  // bias
    for_each_parameter(model, [&](const std::vector<double>& values) { n += values.size(); });
    return n;
}

}  // namespace invnet
