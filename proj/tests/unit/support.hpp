#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "invnet/network.hpp"
#include "invnet/rng.hpp"

namespace testsupport {

// Reference implementation of the coupling stack written with plain loops and
// no library helpers, used as an oracle for network.cpp.
inline std::vector<double> ref_subnet(const invnet::Subnet& s, const std::vector<double>& x) {
    const std::size_t h = s.w1.rows();
    const std::size_t m = s.w1.cols();
    std::vector<double> hid(h);
    for (std::size_t i = 0; i < h; ++i) {
        double acc = s.b1[i];
        for (std::size_t j = 0; j < m; ++j) acc += s.w1.values()[i * m + j] * x[j];
        hid[i] = acc > 0 ? acc : 0;
    }
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        double acc = s.b2[i];
        for (std::size_t j = 0; j < h; ++j) acc += s.w2.values()[i * h + j] * hid[j];
        out[i] = acc > 0 ? acc : 0;
    }
    return out;
}

inline std::vector<double> ref_transform(const invnet::InvNetModel& model, std::vector<double> x) {
    if (model.padded) x.push_back(0.0);
    const std::size_t half = x.size() / 2;
    for (const auto& blk : model.blocks) {
        std::vector<double> x1(x.begin(), x.begin() + half), x2(x.begin() + half, x.end());
        const auto fx = ref_subnet(blk.f, x1);
        for (std::size_t i = 0; i < half; ++i) x2[i] += fx[i];
        const auto gy = ref_subnet(blk.g, x2);
        for (std::size_t i = 0; i < half; ++i) x1[i] += gy[i];
        for (std::size_t i = 0; i < half; ++i) {
            x[i] = x1[i];
            x[half + i] = x2[i];
        }
    }
    return x;
}

inline double ref_logit(const invnet::InvNetModel& model, const std::vector<double>& x) {
    const auto z = ref_transform(model, x);
    double acc = model.b;
    for (std::size_t i = 0; i < z.size(); ++i) acc += model.w[i] * z[i];
    return acc;
}

// Random model with biases perturbed too, so every parameter group matters.
inline invnet::InvNetModel random_model(std::size_t d, std::size_t blocks, std::size_t hidden,
                                        std::uint64_t seed, double scale = 1.0) {
    invnet::SeededRng rng(seed);
    auto model = invnet::initialize_model(d, blocks, hidden, rng);
    invnet::for_each_parameter(model, [&](std::vector<double>& p) {
        for (double& v : p) v = scale * v + 0.05 * rng.normal();
    });
    model.b = 0.1 * rng.normal();
    invnet::apply_padding_mask(model);
    return model;
}

inline std::vector<double> random_vector(invnet::SeededRng& rng, std::size_t d, double sd = 1.0) {
    std::vector<double> v(d);
    for (double& x : v) x = sd * rng.normal();
    return v;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("invnet_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testsupport
