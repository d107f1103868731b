#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "invnet/linalg.hpp"
#include "invnet/rng.hpp"

namespace invnet {

// FC-ReLU-FC-ReLU map from half_dim to half_dim through `hidden` units.
struct Subnet {
    Matrix w1;  // hidden x half_dim
    Vector b1;  // hidden
    Matrix w2;  // half_dim x hidden
    Vector b2;  // half_dim

    static Subnet zeros(std::size_t half_dim, std::size_t hidden_dim);

    std::size_t half_dim() const noexcept { return w1.cols(); }
    std::size_t hidden_dim() const noexcept { return w1.rows(); }

    Vector operator()(std::span<const double> x) const;

    void validate() const;

    friend bool operator==(const Subnet&, const Subnet&) = default;
};

// Additive coupling block: y2 = x2 + F(x1), y1 = x1 + G(y2).
struct CouplingBlock {
    Subnet f;
    Subnet g;

    std::size_t half_dim() const noexcept { return f.half_dim(); }

    friend bool operator==(const CouplingBlock&, const CouplingBlock&) = default;
};

Vector block_forward(const CouplingBlock& block, std::span<const double> x);
Vector block_inverse(const CouplingBlock& block, std::span<const double> y);

// Invertible transform T (the block stack) followed by the linear head
// logit = <w, T(x)> + b. An odd input_dim is handled by appending one zero
// feature; the parameters touching that feature are pinned to zero so the
// padded coordinate stays exactly zero through T, T^-1 and projection.
struct InvNetModel {
    std::vector<CouplingBlock> blocks;
    Vector w;
    double b = 0.0;
    std::size_t input_dim = 0;
    bool padded = false;

    // Dimension of the feature domain (input_dim, plus one when padded).
    std::size_t feature_dim() const noexcept { return input_dim + (padded ? 1 : 0); }
    std::size_t half_dim() const noexcept { return feature_dim() / 2; }
    std::size_t hidden_dim() const noexcept {
        return blocks.empty() ? 0 : blocks.front().f.hidden_dim();
    }

    // Structural checks; throws DimensionError / InputError.
    void validate() const;

    friend bool operator==(const InvNetModel&, const InvNetModel&) = default;
};

// Model whose subnets are all zero, so T is the identity.
InvNetModel make_identity_model(std::size_t input_dim, std::size_t num_blocks,
                                std::size_t hidden_dim, Vector w, double b);

// Uniform(-s, s) weights with s = sqrt(6 / (fan_in + fan_out)), zero hidden
// biases, output biases 1 (except the pinned padding entry), classifier
// weights drawn the same way for a (feature_dim -> 1) layer, b = 0.
InvNetModel initialize_model(std::size_t input_dim, std::size_t num_blocks,
                             std::size_t hidden_dim, SeededRng& rng);

// Zeroes every parameter that would let the padding feature become nonzero.
// No-op for unpadded models.
void apply_padding_mask(InvNetModel& model);

// Input-domain vector -> feature-domain length (appends the zero pad).
Vector pad_input(const InvNetModel& model, std::span<const double> x);

Vector transform(const InvNetModel& model, std::span<const double> x);
Vector inverse_transform(const InvNetModel& model, std::span<const double> z);

double logit(const InvNetModel& model, std::span<const double> x);
// Class 1 iff the logit is strictly positive.
int predict_class(const InvNetModel& model, std::span<const double> x);

// Exact d(logit)/dx by reverse mode. ReLU derivative at exactly 0 is 0.
Vector input_gradient(const InvNetModel& model, std::span<const double> x);

// Adds scale * d(logit)/d(theta) into `grad`, which must have the model's
// shape (use zeros_like). Returns the logit.
double accumulate_parameter_gradient(const InvNetModel& model, std::span<const double> x,
                                     double scale, InvNetModel& grad);

InvNetModel zeros_like(const InvNetModel& model);

// Smallest |pre-activation| over every ReLU evaluated for x. Finite
// differences are only meaningful when this is comfortably above the step.
double min_relu_margin(const InvNetModel& model, std::span<const double> x);

// Visits every parameter array of the model in a fixed order.
template <typename Model, typename Fn>
void for_each_parameter(Model& model, Fn&& fn) {
    for (auto& block : model.blocks) {
        for (auto* net : {&block.f, &block.g}) {
            fn(net->w1.values());
            fn(net->b1);
            fn(net->w2.values());
            fn(net->b2);
        }
    }
    fn(model.w);
}

std::size_t parameter_count(const InvNetModel& model);

}  // namespace invnet
