#include "doctest.h"

#include <cmath>

#include "invnet/error.hpp"
#include "invnet/interpret.hpp"
#include "invnet/synthetic.hpp"
#include "support.hpp"

using namespace invnet;
using testsupport::random_model;
using testsupport::random_vector;

TEST_CASE("projection of a 2-D point onto a line, by hand") {
    // Line x + y - 2 = 0; foot of the perpendicular from (3, 3) is (1, 1).
    const LinearBoundary line({1.0, 1.0}, -2.0);
    const auto p = project_to_boundary(line, std::vector<double>{3.0, 3.0});
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(1.0));
    const auto e = explain_linear(line, std::vector<double>{3.0, 3.0});
    CHECK(e.explanation[0] == doctest::Approx(2.0));
    CHECK(e.importance[1] == doctest::Approx(2.0));  // |w_1 * 2|
}

TEST_CASE("projection lands on the hyperplane, along w, and is idempotent") {
    SeededRng rng(8);
    for (int t = 0; t < 500; ++t) {
        const std::size_t d = 1 + rng.below(30);
        const auto w = random_vector(rng, d, std::exp(rng.uniform(-3, 3)));
        const double b = rng.normal() * 10;
        const auto x = random_vector(rng, d, 5.0);
        const LinearBoundary bd(w, b);
        const auto p = project_to_boundary(bd, x);
        const double scale = 1.0 + std::abs(b) + norm2(w) * norm2(x);
        CHECK(std::abs(dot(w, p) + b) <= 1e-12 * scale);
        // x - p is a multiple of w: compare with its own projection on w.
        const auto diff = subtract(x, p);
        const double c = dot(diff, w) / dot(w, w);
        CHECK(max_abs_diff(diff, scaled(w, c)) <= 1e-12 * (1.0 + norm2(diff)));
        CHECK(max_abs_diff(project_to_boundary(bd, p), p) <= 1e-12 * (1.0 + norm2(p)));
    }
}

TEST_CASE("points on the boundary have zero explanation") {
    const LinearBoundary bd({0.0, 2.0}, -1.0);
    const auto e = explain_linear(bd, std::vector<double>{5.0, 0.5});
    CHECK(norm2(e.explanation) == 0.0);
}

TEST_CASE("zero weight vector is degenerate") {
    CHECK_THROWS_AS(LinearBoundary({0.0, 0.0}, 1.0), DegenerateError);
}

TEST_CASE("network explanation maps back onto the input-domain boundary") {
    SeededRng rng(9);
    for (std::size_t d : {2u, 5u, 10u}) {
        const auto model = random_model(d, 2, 8, 40 + d);
        for (int t = 0; t < 20; ++t) {
            const auto x = random_vector(rng, d);
            const auto e = explain_network(model, x);
            CHECK(std::abs(logit(model, e.x_p)) < 1e-9 * (1.0 + std::abs(logit(model, x))));
            CHECK(max_abs_diff(add(e.explanation, e.x_p), x) < 1e-12);
            for (double v : e.importance) CHECK(v >= 0.0);
        }
    }
}

TEST_CASE("identity network explanation equals the linear explanation") {
    const Vector w{0.5, -1.5, 2.0, 1.0};
    const auto model = make_identity_model(4, 2, 3, w, 0.3);
    const Vector x{1.0, 2.0, -1.0, 0.5};
    const auto a = explain_network(model, x);
    const auto b = explain_linear(LinearBoundary(w, 0.3), x);
    CHECK(max_abs_diff(a.x_p, b.x_p) < 1e-14);
    CHECK(max_abs_diff(a.importance, b.importance) < 1e-14);
}

TEST_CASE("ranking sorts descending with ties to the lower index") {
    const auto r = rank_features({0.5, 2.0, 0.5, 3.0, 0.0});
    CHECK(r.order == std::vector<std::size_t>{3, 1, 0, 2, 4});
    CHECK(r.ranks() == std::vector<std::size_t>{3, 2, 4, 1, 5});
}

TEST_CASE("select_top takes the ceiling of the fraction") {
    const auto r = rank_features({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
    CHECK(select_top(r, 0.1).size() == 2);
    CHECK(select_top(r, 1.0).size() == 11);
    CHECK(select_top(r, 0.1).front() == 10);
    Vector big(19900, 1.0);
    CHECK(select_top(rank_features(big), 0.1).size() == 1990);
    CHECK_THROWS_AS(select_top(r, 0.0), InputError);
    CHECK_THROWS_AS(select_top(r, 1.5), InputError);
}

TEST_CASE("mean importance pools every sample and threads do not change it") {
    SeededRng rng(10);
    auto data = sparse_signal_synth(60, 6, 2, 0.3, rng);
    const auto model = random_model(6, 2, 5, 12);
    const auto serial = explain_dataset(model, data, 1);
    const auto parallel = explain_dataset(model, data, 3);
    REQUIRE(serial.size() == 60);
    Vector manual(6, 0.0);
    for (std::size_t i = 0; i < 60; ++i) {
        CHECK(serial[i].importance == parallel[i].importance);
        for (std::size_t j = 0; j < 6; ++j) manual[j] += serial[i].importance[j] / 60.0;
    }
    const auto r = mean_importance(serial);
    CHECK(max_abs_diff(r.mean_importance, manual) < 1e-14);
    CHECK(mean_importance(model, data, 2).order == r.order);
}

TEST_CASE("inverted boundary curve has zero logit and matches the segment") {
    const auto model = random_model(2, 2, 10, 5);
    const FeatureBox box{-4, 4, -4, 4};
    const auto seg = boundary_segment(feature_boundary(model), 50, box);
    const auto curve = invert_boundary_curve(model, 50, box);
    REQUIRE(curve.size() == seg.size());
    REQUIRE(!curve.empty());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        CHECK(std::abs(logit(model, curve[i])) < 1e-9);
        CHECK(max_abs_diff(transform(model, curve[i]), seg[i]) < 1e-9);
        CHECK(seg[i][0] >= -4 - 1e-9);
        CHECK(seg[i][1] <= 4 + 1e-9);
    }
}

TEST_CASE("boundary segment missing the box is empty; higher dims rejected") {
    const LinearBoundary far({1.0, 0.0}, -100.0);  // x = 100
    CHECK(boundary_segment(far, 10, FeatureBox{-1, 1, -1, 1}).empty());
    const auto model = random_model(4, 1, 2, 1);
    CHECK_THROWS_AS(invert_boundary_curve(model, 10, FeatureBox{-1, 1, -1, 1}), DimensionError);
}
