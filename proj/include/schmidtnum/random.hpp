// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace schmidtnum {

using Rng = std::mt19937_64;

// Deterministic generator for (seed, stream...) so independent tasks such as
// solver restarts get reproducible, non-overlapping streams.
Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {});

// Independent standard complex Gaussian entries.
Eigen::VectorXcd complex_gaussian(Rng& rng, Eigen::Index n);
Eigen::MatrixXcd complex_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols);

// Haar-distributed unitary (QR of a Ginibre matrix with the R-diagonal phases
// removed).
Eigen::MatrixXcd haar_unitary(Rng& rng, Eigen::Index n);

// Uniform point on the probability simplex with n vertices.
Eigen::VectorXd uniform_simplex(Rng& rng, Eigen::Index n);

int uniform_int(Rng& rng, int lo, int hi);
double uniform_real(Rng& rng, double lo, double hi);

}  // namespace schmidtnum
