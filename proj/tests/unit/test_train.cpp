#include "doctest.h"

#include <cmath>

#include "invnet/error.hpp"
#include "invnet/train.hpp"
#include "invnet/synthetic.hpp"
#include "support.hpp"

using namespace invnet;

namespace {

// Two well separated 2-D blobs at (-3, -3) and (3, 3).
LabeledDataset blobs(std::size_t n, std::uint64_t seed) {
    SeededRng rng(seed);
    LabeledDataset d;
    d.features = Matrix(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const int y = static_cast<int>(i % 2);
        const double c = y == 1 ? 3.0 : -3.0;
        d.features(i, 0) = c + 0.5 * rng.normal();
        d.features(i, 1) = c + 0.5 * rng.normal();
        d.labels.push_back(y);
    }
    d.ids = sequential_ids(n);
    return d;
}

}  // namespace

TEST_CASE("logistic loss is the stable BCE of sigmoid(logit)") {
    for (double z : {-5.0, -0.3, 0.0, 0.7, 4.0}) {
        const double p = 1.0 / (1.0 + std::exp(-z));
        CHECK(logistic_loss(z, 1) == doctest::Approx(-std::log(p)));
        CHECK(logistic_loss(z, 0) == doctest::Approx(-std::log(1 - p)));
        CHECK(sigmoid(z) == doctest::Approx(p));
    }
    CHECK(logistic_loss(1000.0, 1) == doctest::Approx(0.0));
    CHECK(logistic_loss(-1000.0, 1) == doctest::Approx(1000.0));
    CHECK(std::isfinite(logistic_loss(1e308, 0)));
}

TEST_CASE("separable blobs reach training accuracy 1 within 50 epochs at lr 1e-2") {
    const auto data = blobs(200, 1);
    TrainConfig cfg;
    cfg.learning_rate = 1e-2;
    cfg.epochs = 50;
    cfg.seed = 3;
    const auto result = train(data, cfg);
    CHECK(accuracy(result.model, data) == 1.0);
    REQUIRE(result.epoch_loss.size() == 50);
    CHECK(result.epoch_loss.back() < result.epoch_loss.front());
}

TEST_CASE("training is deterministic in the seed") {
    const auto data = blobs(50, 2);
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.hidden_dim = 8;
    cfg.seed = 9;
    const auto a = train(data, cfg);
    const auto b = train(data, cfg);
    CHECK(a.model == b.model);
    CHECK(a.epoch_loss == b.epoch_loss);
    cfg.seed = 10;
    CHECK(!(train(data, cfg).model == a.model));
}

TEST_CASE("zero epochs returns the initialization; zero lr changes nothing") {
    const auto data = blobs(20, 3);
    TrainConfig cfg;
    cfg.hidden_dim = 4;
    cfg.seed = 5;
    cfg.epochs = 0;
    const auto init = train(data, cfg);
    CHECK(init.epoch_loss.empty());
    SeededRng rng = SeededRng(5).child("init");
    CHECK(init.model == initialize_model(2, cfg.num_blocks, 4, rng));

    cfg.epochs = 4;
    cfg.learning_rate = 0.0;
    const auto frozen = train(data, cfg);
    CHECK(frozen.model == init.model);
    CHECK(frozen.epoch_loss.size() == 4);
}

TEST_CASE("a single SGD step moves along the negative mean gradient") {
    const auto data = blobs(4, 4);
    TrainConfig cfg;
    cfg.hidden_dim = 3;
    cfg.epochs = 1;
    cfg.batch_size = 4;  // one batch, so shuffling order is irrelevant
    cfg.learning_rate = 0.1;
    cfg.seed = 1;
    SeededRng rng = SeededRng(1).child("init");
    const auto start = initialize_model(2, cfg.num_blocks, 3, rng);
    auto grad = zeros_like(start);
    for (std::size_t i = 0; i < 4; ++i) {
        const double z = logit(start, data.sample(i));
        accumulate_parameter_gradient(start, data.sample(i), (sigmoid(z) - data.labels[i]) / 4.0, grad);
    }
    const auto stepped = train_from(start, data, cfg).model;
    CHECK(stepped.w[0] == doctest::Approx(start.w[0] - 0.1 * grad.w[0]).epsilon(1e-12));
    CHECK(stepped.b == doctest::Approx(start.b - 0.1 * grad.b).epsilon(1e-12));
    CHECK(stepped.blocks[1].g.w2(0, 2) ==
          doctest::Approx(start.blocks[1].g.w2(0, 2) - 0.1 * grad.blocks[1].g.w2(0, 2)).epsilon(1e-12));
}

TEST_CASE("odd-dimensional training keeps the padding pinned") {
    SeededRng rng(6);
    auto data = sparse_signal_synth(40, 3, 1, 0.2, rng);
    TrainConfig cfg;
    cfg.hidden_dim = 5;
    cfg.epochs = 3;
    const auto result = train(data, cfg);
    CHECK(result.model.padded);
    CHECK_NOTHROW(result.model.validate());
}

TEST_CASE("invalid configurations throw") {
    const auto data = blobs(10, 1);
    TrainConfig cfg;
    cfg.batch_size = 0;
    CHECK_THROWS_AS(train(data, cfg), InputError);
    cfg = TrainConfig{};
    cfg.learning_rate = -1;
    CHECK_THROWS_AS(train(data, cfg), InputError);
    cfg = TrainConfig{};
    cfg.num_blocks = 0;
    CHECK_THROWS_AS(train(data, cfg), InputError);
}
