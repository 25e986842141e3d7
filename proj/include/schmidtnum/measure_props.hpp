// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

// Property checks for entanglement measures: vanishing on separable states,
// monotonicity under an operation class (plain and on average), invariance
// under local unitaries, conjugated measures and the E_uni search.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "schmidtnum/hilbert.hpp"
#include "schmidtnum/locc.hpp"
#include "schmidtnum/se_solver.hpp"

namespace schmidtnum {

// Thrown by an evaluator that cannot produce a trustworthy value. The
// harness counts it as skipped, never as a violation.
class MeasureSkipped : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeasureUnderTest {
  std::string name;
  OperationClass declared_class = OperationClass::kLU;
  std::function<double(const DensityOperator&)> evaluate;
};

inline constexpr double kMonotonicitySlack = 1e-7;

struct Violation {
  int trial = 0;
  std::string check;  // "separable", "monotone", "lu_invariant", "average", "chain"
  CMatrix state;
  BipartiteDims dims;
  std::optional<SeparableOperation> operation;
  std::uint64_t seed = 0;
  double before = 0.0;
  double after = 0.0;
  double deficit = 0.0;
};

struct PropertyReport {
  std::string name;
  int checks_run = 0;
  int skipped = 0;
  std::vector<Violation> violations;
  double max_deficit = 0.0;
  double slack = kMonotonicitySlack;
  std::vector<double> values;  // measure values along a chain

  bool pass() const { return max_deficit <= slack; }
};

struct StateSampler {
  std::function<DensityOperator(Rng&)> general;
  std::function<DensityOperator(Rng&)> separable;  // may be empty
};

using OperationSampler = std::function<SeparableOperation(BipartiteDims, Rng&)>;

// Dims drawn uniformly from the list. general: a random pure state with
// probability 1/3, otherwise a mixture of 1 .. d1 d2 random pure states.
// separable: a mixture of 1 .. 4 random product states.
StateSampler standard_state_sampler(std::vector<BipartiteDims> dims);

// sample_operation for the given class.
OperationSampler class_sampler(OperationClass tag);

struct HarnessOptions {
  double slack = kMonotonicitySlack;
  int threads = 1;
};

// E = r_S - 1. Pure inputs use the exact Schmidt rank. Mixed inputs combine
// the NPT lower bound 2, the PPT upper bound 1 for d1 d2 <= 6 and the
// quasi-probability estimate; an unresolved interval raises MeasureSkipped.
MeasureUnderTest schmidt_number_measure(const SolverConfig& cfg);

// tr(rho^2) declared LI monotone. It is not, which makes it a self-test for
// the harness.
MeasureUnderTest purity_measure();

// 1 - tr(rho_1^2), declared LU.
MeasureUnderTest marginal_purity_deficit();

// Trial t uses make_rng(seed, {t}). Checks E(sigma) <= slack on a separable
// sample and E(Lambda rho) <= E(rho) + slack; LU operations are checked in
// both directions.
PropertyReport check_measure_axioms(const MeasureUnderTest& m, const StateSampler& states,
                                    const OperationSampler& ops, int n, std::uint64_t seed,
                                    const HarnessOptions& opts = {});

// E(rho) >= sum_k p_k E(rho_k) - slack with rho_k the normalized image of
// pair k and p_k its share of tr Lambda(rho). Branches with p_k < 1e-12 are
// dropped.
PropertyReport check_average_monotonicity(const MeasureUnderTest& m, const StateSampler& states,
                                          const OperationSampler& ops, int n,
                                          std::uint64_t seed, const HarnessOptions& opts = {});

// E'(rho) = E(t(rho)). t must be tagged LU or LI.
MeasureUnderTest conjugate_measure(const MeasureUnderTest& m, const SeparableOperation& t);

struct UniSearchConfig {
  std::uint64_t seed = 0;
  int samples = 256;
  int refine = 8;
  int sweeps = 3;
};

// max over the identity, sampled LI filters and refined filters of
// E(Lambda_LI(rho)). A lower bound on the supremum over all LI operations.
double e_uni(const MeasureUnderTest& m, const DensityOperator& rho,
             const UniSearchConfig& cfg = {});

// phi_{r_max} -> phi_{r_max - 1} -> ... -> phi_2 by truncation projections
// (down to phi_1 when r_max = 2). Each step must lower the Schmidt-number
// measure by exactly 1 and land on phi_r. values holds the measure on every
// state of the chain.
PropertyReport check_projection_chain(int r_max, BipartiteDims dims,
                                      const SolverConfig& cfg = {});

}  // namespace schmidtnum
