// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

// Signed decompositions rho = sum_l p_l |chi_l><chi_l| over the r-SE vectors
// of rho, and the Schmidt-number readout from their negativity.

#pragma once

#include <optional>
#include <vector>

#include "schmidtnum/hilbert.hpp"
#include "schmidtnum/se_solver.hpp"

namespace schmidtnum {

inline constexpr double kReconstructionTolerance = 1e-6;
inline constexpr double kNegativityTolerance = -1e-6;
inline constexpr double kWeightPrune = 1e-12;

struct QuasiProbability {
  int r = 0;
  std::vector<PureState> chi;
  RVector weights;
  Eigen::MatrixXd gram;  // |<chi_k|chi_l>|^2
  RVector lambdas;       // <chi_k|rho|chi_k>
  double reconstruction_residual = 0.0;
  double min_weight = 0.0;
  // reconstruction_residual <= 1e-6
  bool complete = false;
  // The min-norm solution of G p = lambda had negative entries and a
  // nonnegative least-squares fit over the same vectors reached the tolerance.
  bool nonnegative_refit = false;
  int discovery_rounds = 0;
  SolverStats stats;  // of the last solver pass

  bool nonnegative() const { return min_weight >= kNegativityTolerance; }
};

struct Pseudomixture {
  double mu = 0.0;
  DensityOperator sigma;
  std::optional<DensityOperator> sigma_prime;  // absent when mu = 0
};

struct SchmidtNumberEstimate {
  // Schmidt number lies in [lower, upper]; exact when they agree.
  int lower = 1;
  int upper = 1;
  // First level whose decomposition was incomplete, 0 if none.
  int failed_level = 0;
  std::vector<QuasiProbability> levels;  // r = 1, 2, ... as evaluated

  bool exact() const { return lower == upper; }
};

// Weights for a fixed set of rank-r vectors. Exposed for tests.
QuasiProbability fit_quasiprob(const DensityOperator& rho, int r, std::vector<PureState> chi);

// Never throws on an incomplete basis; the result is flagged instead. Use
// require_complete to turn the flag into an IncompleteBasisError.
QuasiProbability build_quasiprob(const DensityOperator& rho, int r, const SolverConfig& cfg);
void require_complete(const QuasiProbability& qp);

// Smallest r whose decomposition is complete and nonnegative.
SchmidtNumberEstimate estimate_schmidt_number(const DensityOperator& rho, const SolverConfig& cfg);

// rho = (1 + mu) sigma - mu sigma'. Throws IncompleteBasisError on an
// incomplete input.
Pseudomixture pseudomixture(const QuasiProbability& qp);

}  // namespace schmidtnum
