#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "invnet/dataset.hpp"
#include "invnet/network.hpp"

namespace invnet {

struct TrainConfig {
    double learning_rate = 1e-2;
    std::size_t epochs = 50;
    std::size_t batch_size = 8;
    std::uint64_t seed = 0;
    std::size_t hidden_dim = 64;
    std::size_t num_blocks = 2;

    void validate() const;
};

struct TrainResult {
    InvNetModel model;
    std::vector<double> epoch_loss;  // mean per-sample loss seen during each epoch
};

// Binary cross-entropy of sigmoid(logit) against a {0, 1} label, computed
// without overflow for large |logit|.
double logistic_loss(double logit, int label);
double sigmoid(double v);

// Plain minibatch SGD on the mean logistic loss. Initialization draws from
// the child stream "init" of the seed, epoch shuffles from "shuffle".
TrainResult train(const LabeledDataset& data, const TrainConfig& config);

// Same, starting from a given model instead of a fresh initialization.
TrainResult train_from(InvNetModel model, const LabeledDataset& data, const TrainConfig& config);

double accuracy(const InvNetModel& model, const LabeledDataset& data);

}  // namespace invnet
