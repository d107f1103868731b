#pragma once

#include <cstddef>

#include "invnet/dataset.hpp"
#include "invnet/rng.hpp"

namespace invnet {

// Two interleaving half circles of radius 1. Label 0: (cos t, sin t); label 1:
// (1 - cos t, 0.5 - sin t); t ~ U[0, pi]. Isotropic Gaussian noise is added
// afterwards. The first n/2 rows are label 0.
LabeledDataset two_moons(std::size_t n, double noise_sd, SeededRng& rng);

// Two Gaussian clusters whose centres are `separation` apart along (1, 1), so
// y = -x separates them. Each cluster has unit sd along (1, 1) and sd
// `boundary_spread` along the boundary direction (1, -1); the default is the
// isotropic unit case. Label 1 is the cluster at +(1, 1).
LabeledDataset diagonal_clusters(std::size_t n, double separation, SeededRng& rng,
                                 double boundary_spread = 1.0);

// Two unit-variance isotropic clusters with equal x mean and y means
// -separation/2 (label 0) and +separation/2 (label 1).
LabeledDataset axis_clusters(std::size_t n, double separation, SeededRng& rng);

// n samples of d features, k of which carry signal.
//   background feature:  N(0, 1)
//   informative feature: (2y - 1) * s_j + noise_sd * N(0, 1), s_j = +-1
//   target "score":      sum_j beta_j * x_j + noise_sd * N(0, 1) over the
//                        informative features, |beta_j| ~ U[0.5, 1.5]
// Labels alternate 0, 1, 0, ... The support is recorded sorted ascending.
LabeledDataset sparse_signal_synth(std::size_t n, std::size_t d, std::size_t k, double noise_sd,
                                   SeededRng& rng);

}  // namespace invnet
