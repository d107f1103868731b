#include "invnet/train.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "invnet/error.hpp"

namespace invnet {

void TrainConfig::validate() const {
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw InputError("train: learning_rate must be finite and >= 0");
    }
    if (batch_size == 0) throw InputError("train: batch_size must be >= 1");
    if (hidden_dim == 0) throw InputError("train: hidden_dim must be >= 1");
    if (num_blocks == 0) throw InputError("train: num_blocks must be >= 1");
}

double sigmoid(double v) {
    if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
}

double logistic_loss(double logit, int label) {
    // softplus(l) - y * l
    const double softplus = logit > 0.0 ? logit + std::log1p(std::exp(-logit))
                                        : std::log1p(std::exp(logit));
    return softplus - (label == 1 ? logit : 0.0);
}

namespace {

void check_training_data(const LabeledDataset& data) {
    if (data.size() == 0) throw InputError("train: dataset is empty");
    data.validate();
}

}  // namespace

TrainResult train(const LabeledDataset& data, const TrainConfig& config) {
    config.validate();
    check_training_data(data);
    SeededRng init_rng = SeededRng(config.seed).child("init");
    InvNetModel model =
        initialize_model(data.dim(), config.num_blocks, config.hidden_dim, init_rng);
    return train_from(std::move(model), data, config);
}

TrainResult train_from(InvNetModel model, const LabeledDataset& data, const TrainConfig& config) {
    config.validate();
    check_training_data(data);
    model.validate();
    if (model.input_dim != data.dim()) {
        throw DimensionError("train: model expects " + std::to_string(model.input_dim) +
                             " features, dataset has " + std::to_string(data.dim()));
    }

    SeededRng shuffle_rng = SeededRng(config.seed).child("shuffle");
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    TrainResult result;
    result.epoch_loss.reserve(config.epochs);
    InvNetModel grad = zeros_like(model);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(std::span<std::size_t>(order));
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            const double inv_batch = 1.0 / static_cast<double>(stop - start);
            grad = zeros_like(model);
            for (std::size_t k = start; k < stop; ++k) {
                const std::size_t i = order[k];
                const auto x = data.sample(i);
                const double l = logit(model, x);
                loss_sum += logistic_loss(l, data.labels[i]);
                const double dl = sigmoid(l) - static_cast<double>(data.labels[i]);
                accumulate_parameter_gradient(model, x, dl * inv_batch, grad);
            }
            apply_padding_mask(grad);
            if (config.learning_rate == 0.0) continue;
            // theta -= lr * grad, walking both models in the same order.
            std::vector<std::vector<double>*> params;
            for_each_parameter(model, [&](std::vector<double>& v) { params.push_back(&v); });
            std::size_t p = 0;
            for_each_parameter(grad, [&](const std::vector<double>& g) {
                axpy(-config.learning_rate, g, *params[p++]);
            });
            model.b -= config.learning_rate * grad.b;
        }
        result.epoch_loss.push_back(loss_sum / static_cast<double>(data.size()));
    }
    result.model = std::move(model);
    return result;
}

double accuracy(const InvNetModel& model, const LabeledDataset& data) {
    if (data.size() == 0) throw InputError("accuracy: dataset is empty");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (predict_class(model, data.sample(i)) == data.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace invnet
