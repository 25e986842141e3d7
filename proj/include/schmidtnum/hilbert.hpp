// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

// Finite-dimensional bipartite Hilbert space H1 (x) H2.
//
// Composite basis |i,j> has index i * d2 + j throughout the library. States
// and operators are validated once, at construction; every function below
// assumes validated inputs.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "schmidtnum/random.hpp"

namespace schmidtnum {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kNorm = 1e-12;
inline constexpr double kHermitian = 1e-10;
inline constexpr double kPositivity = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kSchmidtCutoff = 1e-10;
}  // namespace tol

struct BipartiteDims {
  int d1 = 1;
  int d2 = 1;

  BipartiteDims() = default;
  BipartiteDims(int d1_, int d2_);

  int total() const noexcept { return d1 * d2; }
  int min_dim() const noexcept { return d1 < d2 ? d1 : d2; }
  int index(int i, int j) const noexcept { return i * d2 + j; }

  friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;
};

// Normalized pure state on H1 (x) H2.
class PureState {
 public:
  // Validates: length d1*d2, finite entries, norm 1 within 1e-12.
  PureState(BipartiteDims dims, CVector amplitudes);
  // Rescales any nonzero finite vector to unit norm.
  static PureState normalized(BipartiteDims dims, CVector amplitudes);

  const BipartiteDims& dims() const noexcept { return dims_; }
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  // Coefficient matrix Psi(i, j) = <i,j|psi>, shape d1 x d2.
  CMatrix coefficient_matrix() const;
  CMatrix projector() const;

 private:
  BipartiteDims dims_;
  CVector amplitudes_;
};

class DensityOperator {
 public:
  // Validates Hermiticity (max elementwise 1e-10), trace 1 and
  // minimum eigenvalue >= -1e-10.
  DensityOperator(BipartiteDims dims, CMatrix matrix);
  static DensityOperator from_pure(const PureState& psi);
  // Hermitizes and divides by the trace, then validates.
  static DensityOperator from_unnormalized(BipartiteDims dims, const CMatrix& matrix);

  const BipartiteDims& dims() const noexcept { return dims_; }
  const CMatrix& matrix() const noexcept { return matrix_; }

 private:
  BipartiteDims dims_;
  CMatrix matrix_;
};

class Observable {
 public:
  // Validates Hermiticity within 1e-10 and stores (M + M^dagger) / 2.
  Observable(BipartiteDims dims, CMatrix matrix);
  static Observable identity(BipartiteDims dims);
  static Observable projector(const PureState& psi);

  const BipartiteDims& dims() const noexcept { return dims_; }
  const CMatrix& matrix() const noexcept { return matrix_; }

 private:
  BipartiteDims dims_;
  CMatrix matrix_;
};

struct SchmidtDecomposition {
  RVector coefficients;   // nonincreasing, all > cutoff
  CMatrix left_basis;     // d1 x rank, orthonormal columns e_n
  CMatrix right_basis;    // d2 x rank, orthonormal columns f_n
  int rank = 0;

  // sum_n lambda_n e_n (x) f_n
  CVector reconstruct() const;
};

struct Ensemble {
  RVector weights;
  std::vector<PureState> members;

  Ensemble(RVector weights, std::vector<PureState> members);
  DensityOperator mixture() const;
};

SchmidtDecomposition schmidt_decompose(const PureState& state,
                                       double cutoff = tol::kSchmidtCutoff);
int schmidt_rank(const PureState& state, double cutoff = tol::kSchmidtCutoff);

// <i,j| M^PT |k,l> = <i,l| M |k,j> (transpose on subsystem 2).
CMatrix partial_transpose(const CMatrix& m, BipartiteDims dims);
inline CMatrix partial_transpose(const DensityOperator& rho) {
  return partial_transpose(rho.matrix(), rho.dims());
}

enum class Subsystem { kFirst = 1, kSecond = 2 };

// Traces out `traced` and returns the operator on the remaining factor.
CMatrix partial_trace(const CMatrix& m, Subsystem traced, BipartiteDims dims);

// (1/sqrt r) sum_{k<r} |k,k>.
PureState phi_r(int r, BipartiteDims dims);

// V = (|phi_r><phi_r|)^PT = (1/r) sum_{k,l<r} |k,l><l,k|.
Observable swap_witness_V(int r, BipartiteDims dims);

// tr(rho L); the imaginary residue (<= 1e-10 for valid inputs) is dropped.
double expectation(const DensityOperator& rho, const Observable& l);
double expectation(const PureState& psi, const Observable& l);

PureState random_pure(BipartiteDims dims, Rng& rng);
PureState random_pure(BipartiteDims dims, std::uint64_t seed);
// Random pure state with the given Schmidt coefficients in Haar-random local
// bases. The coefficients are normalized.
PureState random_pure_with_coefficients(BipartiteDims dims, const RVector& coefficients,
                                        Rng& rng);
DensityOperator random_density(BipartiteDims dims, Rng& rng, int mix_count);
DensityOperator random_density(BipartiteDims dims, std::uint64_t seed, int mix_count);
// Convex mixture of mix_count random product projectors.
DensityOperator random_separable(BipartiteDims dims, Rng& rng, int mix_count);

// Utilities shared across modules.
CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);
double max_hermitian_deviation(const CMatrix& m);
// Multiplies by a global phase so the largest-magnitude entry is real positive.
CVector phase_aligned(const CVector& v);
// |<a|b>|^2
double fidelity(const CVector& a, const CVector& b);
double min_eigenvalue(const CMatrix& hermitian);
double max_eigenvalue(const CMatrix& hermitian);

}  // namespace schmidtnum
