// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

// Separable operations rho -> sum_i (A_i (x) B_i) rho (A_i (x) B_i)^dagger,
// normalized by the trace, with class tags for the special subclasses.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "schmidtnum/hilbert.hpp"

namespace schmidtnum {

enum class OperationClass { kLU, kLI, kLP, kGeneral };

std::string to_string(OperationClass c);
OperationClass parse_operation_class(const std::string& s);

struct LocalOperatorPair {
  CMatrix A;  // d1 x d1
  CMatrix B;  // d2 x d2
};

inline constexpr double kAnnihilationThreshold = 1e-14;
inline constexpr double kMaxCondition = 1e8;

class SeparableOperation {
 public:
  // Validates the class invariants:
  //   LU       single pair, A and B unitary within 1e-10
  //   LI       single pair, smallest singular value > 1e-10 on both sides
  //   LP       single pair, A and B orthogonal projectors within 1e-10
  //   GENERAL  finite entries only
  SeparableOperation(BipartiteDims dims, std::vector<LocalOperatorPair> pairs,
                     OperationClass tag);

  static SeparableOperation identity(BipartiteDims dims);

  const BipartiteDims& dims() const noexcept { return dims_; }
  const std::vector<LocalOperatorPair>& pairs() const noexcept { return pairs_; }
  OperationClass class_tag() const noexcept { return tag_; }

  // A_i (x) B_i for pair i.
  CMatrix kraus(std::size_t i) const;

 private:
  BipartiteDims dims_;
  std::vector<LocalOperatorPair> pairs_;
  OperationClass tag_;
};

// sum_i K_i m K_i^dagger without normalization.
CMatrix apply_unnormalized(const SeparableOperation& op, const CMatrix& m);

// Throws AnnihilationError when tr Lambda(rho) <= 1e-14.
DensityOperator apply(const SeparableOperation& op, const DensityOperator& rho);

// Acts as op1 after op2: pairs (A1 A2, B1 B2) over all combinations.
SeparableOperation compose(const SeparableOperation& op1, const SeparableOperation& op2);

// Inverse of an LI operation. Throws OperationClassError for other tags and
// IllConditionedError when a local factor has condition number > 1e8.
SeparableOperation invert(const SeparableOperation& op);

// T = U1 diag(sqrt(r) lambda_1, ..., sqrt(r) lambda_r, 1, ..., 1) (x) U2.
// Maps phi_r to sum_k lambda_k U1|k> (x) U2|k>.
SeparableOperation local_filter_T(const CMatrix& U1, const CMatrix& U2, const RVector& lambdas,
                                  int r);

// (sum_{k<r} |k><k|, I) tagged LP.
SeparableOperation truncation_projection(int r, BipartiteDims dims);

// Kraus pairs mapping the generator to the ensemble members:
// (A_k (x) B_k)|generator> = sqrt(p_k) |psi_k>.
SeparableOperation generator_kraus(const PureState& generator, const Ensemble& ensemble);

SeparableOperation sample_operation(OperationClass tag, BipartiteDims dims, Rng& rng);
SeparableOperation sample_operation(OperationClass tag, BipartiteDims dims, std::uint64_t seed);

// n sampled operations of one class, optionally preceded by the identity.
std::vector<SeparableOperation> sample_family(OperationClass tag, BipartiteDims dims, int n,
                                              std::uint64_t seed, bool include_identity);

// Two-branch measurement (P (x) I, (I - P) (x) I) with a random projector P.
SeparableOperation sample_two_branch_projection(BipartiteDims dims, Rng& rng);

}  // namespace schmidtnum
