// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

// Stationary points of <psi_r|L|psi_r> over unit vectors of Schmidt rank <= r
// (the r-SE equations), found by alternating eigen-iteration with restarts.
//
// With the y-side fixed, psi = sum_k x_k (x) y_k is linear in the stacked
// x-vector, psi = E x with E = [I (x) y_1, ..., I (x) y_r], and the stationarity
// condition reads (E^dagger L E) x = lambda (E^dagger E) x = lambda (Y (x) I) x.
// Orthonormalizing the fixed side makes E an isometry, so every half-step is an
// ordinary Hermitian eigenproblem whose top eigenvalue cannot be below the
// current lambda.

#pragma once

#include <cstdint>
#include <vector>

#include "schmidtnum/hilbert.hpp"

namespace schmidtnum {

struct SolverConfig {
  int restarts = 64;
  int max_iter = 500;
  double tol_lambda = 1e-10;
  double tol_residual = 1e-8;
  double dedupe_overlap = 1.0 - 1e-6;
  std::uint64_t seed = 0;
  double gram_rank_cutoff = 1e-10;
  // Also follow non-maximal eigenpairs, descent runs and eigenvector
  // truncations. Needed for quasi-probabilities, not for f12.
  bool collect_candidates = true;
  int threads = 1;
  // Independent solver passes whose solution sets are pooled when building a
  // quasi-probability; later passes run only while the fit is incomplete or
  // still has negative weights.
  int discovery_rounds = 3;

  // Throws InvalidInputError on nonpositive budgets or tolerances.
  void validate() const;
};

struct RankRAnsatz {
  int r = 0;
  std::vector<CVector> x_vectors;  // on H1
  std::vector<CVector> y_vectors;  // on H2

  // sum_k x_k (x) y_k
  CVector assemble() const;
};

struct RSESolution {
  double lambda = 0.0;
  RankRAnsatz ansatz;  // Schmidt gauge: x_k = s_k e_k, y_k = f_k
  CMatrix gram_x;      // X = (<x_i|x_j>)
  CMatrix gram_y;      // Y = (<y_i|y_j>)
  double residual = 0.0;
  int iterations = 0;
  CVector state;       // assembled, unit norm
};

struct SolverStats {
  int restarts = 0;
  int runs = 0;
  int converged_runs = 0;
  long total_iterations = 0;
  double best_residual = 0.0;
  int unique_solutions = 0;
  // Fraction of converged runs that landed on an already known solution.
  // Near 1 means the restarts keep rediscovering the same set.
  double rediscovery = 0.0;
};

struct SolveResult {
  std::vector<RSESolution> solutions;  // lambda descending
  SolverStats stats;
};

struct BlockSystem {
  CMatrix blocks;  // r*d x r*d, Hermitian
  CMatrix gram;    // r x r
};

// `side_vectors` live on subsystem `side`; the blocks act on the stacked
// vectors of the other subsystem. For side = kSecond the (i, j) block is
// tr_2[L (I (x) |y_j><y_i|)] and E^dagger E = Y (x) I.
BlockSystem assemble_blocks(const Observable& L, const std::vector<CVector>& side_vectors,
                            Subsystem side);

// Largest residual of the two r-SE equations at a unit vector psi with
// multiplier lambda, measured on the Schmidt support of psi (squared
// coefficients above `cutoff`).
double rse_residual(const Observable& L, const CVector& psi, double lambda, double cutoff);

// All stationary points discovered, deduplicated by fidelity and sorted.
// Throws ConvergenceError when no run converges.
SolveResult solve_rse(const Observable& L, int r, const SolverConfig& cfg);

// Largest r-SE; a certified lower bound on the supremum.
double f12_r(const Observable& L, int r, const SolverConfig& cfg);

double f_max(const Observable& L);

// r = 1 with the plain SE iteration L_b a = g a, L_a b = g b.
SolveResult se_solve_r1(const Observable& L, const SolverConfig& cfg);

// lambda after every half-step of the ascent run for one restart.
std::vector<double> ascent_trace(const Observable& L, int r, const SolverConfig& cfg,
                                 int restart);

// Independent lower bound: best of `samples` random rank-r ansatz draws, each
// refined by 50 alternating shifted power steps.
double oracle_f12_r(const Observable& L, int r, int samples, std::uint64_t seed);

}  // namespace schmidtnum
