// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

// Schmidt-number witnesses, the partial-transpose pseudo-measure and the
// operational measure E_M.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schmidtnum/hilbert.hpp"
#include "schmidtnum/locc.hpp"
#include "schmidtnum/se_solver.hpp"

namespace schmidtnum {

enum class Verdict { kCertifiedAboveR, kInconclusive };
std::string to_string(Verdict v);

struct WitnessOptions {
  double threshold = 1e-7;
  int oracle_samples = 256;  // 0 disables the cross-check
  std::uint64_t oracle_seed = 0;
};

struct WitnessCertificate {
  int r = 0;
  Observable observable;
  double f12_r_value = 0.0;     // solver
  double oracle_value = 0.0;    // brute force, NaN when disabled
  double expectation_value = 0.0;
  // expectation - max(f12_r_value, oracle_value)
  double margin = 0.0;
  Verdict verdict = Verdict::kInconclusive;
  SolverStats stats;
};

// tr(rho L) > f12_r(L) certifies Schmidt number >= r + 1. Both f12 estimates
// are lower bounds on the supremum, so the larger one is used.
WitnessCertificate certify_schmidt_number(const DensityOperator& rho, const Observable& L, int r,
                                          const SolverConfig& cfg,
                                          const WitnessOptions& opts = {});

struct NptResult {
  bool npt = false;
  double min_eigenvalue = 0.0;
  CVector eigenvector;
};

// NPT iff the smallest eigenvalue of rho^PT is below -1e-10.
NptResult is_npt(const DensityOperator& rho);

struct SearchConfig {
  std::uint64_t seed = 0;
  int li_samples = 64;
  int lp_samples = 32;
  int refine = 4;  // best LI candidates polished by coordinate ascent
  int sweeps = 3;
  // Applied before every candidate operation. A local unitary frame makes
  // the finite family covariant under that unitary.
  std::optional<SeparableOperation> frame;
};

struct EptResult {
  double value = 0.0;  // clamped at 0, values below 1e-12 count as 0
  double raw = 0.0;
  int best_r = 0;
  std::optional<SeparableOperation> best_operation;
  int evaluated = 0;
};

// Lower bound on sup_Lambda max_r -tr[Lambda(rho) V_r] / tr Lambda(rho) over
// identity, sampled LI and LP operations and refined LI filters.
EptResult e_pt_lower_bound(const DensityOperator& rho, const SearchConfig& search = {});

// max over L of tr(rho L) - f12_r(L), i.e. -tr(rho W) with W = f12_r(L) I - L,
// clamped at 0.
double witness_measure_lower_bound(const DensityOperator& rho,
                                   const std::vector<Observable>& family, int r,
                                   const SolverConfig& cfg);

struct OperationalMeasureResult {
  double value = 0.0;  // in [0, 1]
  std::optional<SeparableOperation> best_operation;
  double f_M = 0.0;
  double f12_M = 0.0;
  double raw_supremum = 0.0;  // before clamping
  int skipped = 0;            // annihilated samples
};

inline constexpr double kDegenerateDenominator = 1e-10;

// clamp_[0,1]( (max_Lambda tr(Lambda(rho) M) - f12(M)) / (f(M) - f12(M)) ),
// and 0 when f(M) = f12(M).
OperationalMeasureResult operational_measure(const DensityOperator& rho, const Observable& M,
                                             const std::vector<SeparableOperation>& family,
                                             const SolverConfig& cfg);

}  // namespace schmidtnum
