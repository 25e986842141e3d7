// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

#include "schmidtnum/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "schmidtnum/errors.hpp"

namespace schmidtnum {

namespace {

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

bool all_finite(const CMatrix& m) {
  return m.allFinite();
}

void require_square(const CMatrix& m, int n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw DimensionMismatchError(std::string(what) + ": expected " + std::to_string(n) + "x" +
                                 std::to_string(n) + " matrix, got " +
                                 std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

BipartiteDims::BipartiteDims(int d1_, int d2_) : d1(d1_), d2(d2_) {
  if (d1 < 1 || d2 < 1) {
    throw InvalidInputError("dims: both factors must be >= 1, got [" + std::to_string(d1) +
                            ", " + std::to_string(d2) + "]");
  }
}

// ---------------------------------------------------------------------------

PureState::PureState(BipartiteDims dims, CVector amplitudes)
    : dims_(dims), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != dims_.total()) {
    throw DimensionMismatchError("pure state: expected " + std::to_string(dims_.total()) +
                                 " amplitudes, got " + std::to_string(amplitudes_.size()));
  }
  if (!amplitudes_.allFinite()) throw InvalidInputError("pure state: non-finite amplitude");
  const double dev = std::abs(amplitudes_.norm() - 1.0);
  if (dev > tol::kNorm) {
    throw InvalidInputError("pure state: norm deviates from 1 by " + sci(dev));
  }
}

PureState PureState::normalized(BipartiteDims dims, CVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvalidInputError("pure state: cannot normalize a zero or non-finite vector");
  }
  amplitudes /= n;
  return PureState(dims, std::move(amplitudes));
}

CMatrix PureState::coefficient_matrix() const {
  CMatrix psi(dims_.d1, dims_.d2);
  for (int i = 0; i < dims_.d1; ++i)
    for (int j = 0; j < dims_.d2; ++j) psi(i, j) = amplitudes_(dims_.index(i, j));
  return psi;
}

CMatrix PureState::projector() const {
  return amplitudes_ * amplitudes_.adjoint();
}

// ---------------------------------------------------------------------------

DensityOperator::DensityOperator(BipartiteDims dims, CMatrix matrix)
    : dims_(dims), matrix_(std::move(matrix)) {
  require_square(matrix_, dims_.total(), "density operator");
  if (!all_finite(matrix_)) throw InvalidInputError("density operator: non-finite entry");
  const double herm = max_hermitian_deviation(matrix_);
  if (herm > tol::kHermitian) {
    throw InvalidInputError("density operator: not Hermitian, max |M - M^dagger| = " +
                            sci(herm));
  }
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
  const double trace_dev = std::abs(matrix_.trace().real() - 1.0);
  if (trace_dev > tol::kTrace) {
    throw InvalidInputError("density operator: trace deviates from 1 by " + sci(trace_dev));
  }
  const double lo = min_eigenvalue(matrix_);
  if (lo < -tol::kPositivity) {
    throw InvalidInputError("density operator: not positive semidefinite, min eigenvalue " +
                            sci(lo));
  }
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return DensityOperator(psi.dims(), psi.projector());
}

DensityOperator DensityOperator::from_unnormalized(BipartiteDims dims, const CMatrix& matrix) {
  require_square(matrix, dims.total(), "density operator");
  CMatrix h = 0.5 * (matrix + matrix.adjoint());
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw InvalidInputError("density operator: nonpositive trace " + sci(tr));
  h /= tr;
  return DensityOperator(dims, std::move(h));
}

// ---------------------------------------------------------------------------

Observable::Observable(BipartiteDims dims, CMatrix matrix)
    : dims_(dims), matrix_(std::move(matrix)) {
  require_square(matrix_, dims_.total(), "observable");
  if (!all_finite(matrix_)) throw InvalidInputError("observable: non-finite entry");
  const double herm = max_hermitian_deviation(matrix_);
  if (herm > tol::kHermitian) {
    throw InvalidInputError("observable: not Hermitian, max |M - M^dagger| = " + sci(herm));
  }
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
}

Observable Observable::identity(BipartiteDims dims) {
  return Observable(dims, CMatrix::Identity(dims.total(), dims.total()));
}

Observable Observable::projector(const PureState& psi) {
  return Observable(psi.dims(), psi.projector());
}

// ---------------------------------------------------------------------------

CVector SchmidtDecomposition::reconstruct() const {
  const Eigen::Index d1 = left_basis.rows();
  const Eigen::Index d2 = right_basis.rows();
  CVector out = CVector::Zero(d1 * d2);
  for (int n = 0; n < rank; ++n)
    out += coefficients(n) * kron(CVector(left_basis.col(n)), CVector(right_basis.col(n)));
  return out;
}

Ensemble::Ensemble(RVector weights_, std::vector<PureState> members_)
    : weights(std::move(weights_)), members(std::move(members_)) {
  if (members.empty() || weights.size() != static_cast<Eigen::Index>(members.size())) {
    throw InvalidInputError("ensemble: need one positive weight per member");
  }
  if ((weights.array() <= 0.0).any()) throw InvalidInputError("ensemble: weights must be > 0");
  const double dev = std::abs(weights.sum() - 1.0);
  if (dev > tol::kTrace) {
    throw InvalidInputError("ensemble: weights sum deviates from 1 by " + sci(dev));
  }
  for (const auto& m : members) {
    if (!(m.dims() == members.front().dims()))
      throw DimensionMismatchError("ensemble: members have different dims");
  }
}

DensityOperator Ensemble::mixture() const {
  const BipartiteDims dims = members.front().dims();
  CMatrix rho = CMatrix::Zero(dims.total(), dims.total());
  for (std::size_t k = 0; k < members.size(); ++k)
    rho += weights(static_cast<Eigen::Index>(k)) * members[k].projector();
  return DensityOperator::from_unnormalized(dims, rho);
}

// ---------------------------------------------------------------------------

SchmidtDecomposition schmidt_decompose(const PureState& state, double cutoff) {
  if (cutoff < 0.0) throw InvalidInputError("schmidt_decompose: cutoff must be >= 0");
  const CMatrix psi = state.coefficient_matrix();
  Eigen::JacobiSVD<CMatrix> svd(psi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  int rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;

  SchmidtDecomposition out;
  out.rank = rank;
  out.coefficients = s.head(rank);
  out.left_basis = svd.matrixU().leftCols(rank);
  // Psi = U S V^dagger, so psi = sum_n s_n u_n (x) conj(v_n).
  out.right_basis = svd.matrixV().leftCols(rank).conjugate();
  return out;
}

int schmidt_rank(const PureState& state, double cutoff) {
  return schmidt_decompose(state, cutoff).rank;
}

CMatrix partial_transpose(const CMatrix& m, BipartiteDims dims) {
  require_square(m, dims.total(), "partial_transpose");
  CMatrix out(m.rows(), m.cols());
  for (int i = 0; i < dims.d1; ++i)
    for (int j = 0; j < dims.d2; ++j)
      for (int k = 0; k < dims.d1; ++k)
        for (int l = 0; l < dims.d2; ++l)
          out(dims.index(i, j), dims.index(k, l)) = m(dims.index(i, l), dims.index(k, j));
  return out;
}

CMatrix partial_trace(const CMatrix& m, Subsystem traced, BipartiteDims dims) {
  require_square(m, dims.total(), "partial_trace");
  if (traced == Subsystem::kSecond) {
    CMatrix out = CMatrix::Zero(dims.d1, dims.d1);
    for (int i = 0; i < dims.d1; ++i)
      for (int k = 0; k < dims.d1; ++k)
        for (int j = 0; j < dims.d2; ++j) out(i, k) += m(dims.index(i, j), dims.index(k, j));
    return out;
  }
  CMatrix out = CMatrix::Zero(dims.d2, dims.d2);
  for (int j = 0; j < dims.d2; ++j)
    for (int l = 0; l < dims.d2; ++l)
      for (int i = 0; i < dims.d1; ++i) out(j, l) += m(dims.index(i, j), dims.index(i, l));
  return out;
}

PureState phi_r(int r, BipartiteDims dims) {
  if (r < 1 || r > dims.min_dim()) {
    throw InvalidInputError("phi_r: r = " + std::to_string(r) + " outside [1, " +
                            std::to_string(dims.min_dim()) + "]");
  }
  CVector v = CVector::Zero(dims.total());
  const double a = 1.0 / std::sqrt(static_cast<double>(r));
  for (int k = 0; k < r; ++k) v(dims.index(k, k)) = a;
  return PureState::normalized(dims, std::move(v));
}

Observable swap_witness_V(int r, BipartiteDims dims) {
  if (r < 1 || r > dims.min_dim()) {
    throw InvalidInputError("swap_witness_V: r = " + std::to_string(r) + " outside [1, " +
                            std::to_string(dims.min_dim()) + "]");
  }
  CMatrix v = CMatrix::Zero(dims.total(), dims.total());
  for (int k = 0; k < r; ++k)
    for (int l = 0; l < r; ++l) v(dims.index(k, l), dims.index(l, k)) = 1.0 / r;
  return Observable(dims, std::move(v));
}

double expectation(const DensityOperator& rho, const Observable& l) {
  if (!(rho.dims() == l.dims())) throw DimensionMismatchError("expectation: dims differ");
  // tr(rho L) = sum_ij rho_ij L_ji
  const Complex t = (rho.matrix().transpose().array() * l.matrix().array()).sum();
  return t.real();
}

double expectation(const PureState& psi, const Observable& l) {
  if (!(psi.dims() == l.dims())) throw DimensionMismatchError("expectation: dims differ");
  return psi.amplitudes().dot(l.matrix() * psi.amplitudes()).real();
}

// ---------------------------------------------------------------------------

PureState random_pure(BipartiteDims dims, Rng& rng) {
  return PureState::normalized(dims, complex_gaussian(rng, dims.total()));
}

PureState random_pure(BipartiteDims dims, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return random_pure(dims, rng);
}

PureState random_pure_with_coefficients(BipartiteDims dims, const RVector& coefficients,
                                        Rng& rng) {
  if (coefficients.size() < 1 || coefficients.size() > dims.min_dim())
    throw InvalidInputError("random_pure_with_coefficients: too many coefficients");
  const CMatrix u1 = haar_unitary(rng, dims.d1);
  const CMatrix u2 = haar_unitary(rng, dims.d2);
  CVector v = CVector::Zero(dims.total());
  for (Eigen::Index k = 0; k < coefficients.size(); ++k)
    v += coefficients(k) * kron(CVector(u1.col(k)), CVector(u2.col(k)));
  return PureState::normalized(dims, std::move(v));
}

DensityOperator random_density(BipartiteDims dims, Rng& rng, int mix_count) {
  if (mix_count < 1) throw InvalidInputError("random_density: mix_count must be >= 1");
  const RVector w = uniform_simplex(rng, mix_count);
  CMatrix rho = CMatrix::Zero(dims.total(), dims.total());
  for (int k = 0; k < mix_count; ++k) rho += w(k) * random_pure(dims, rng).projector();
  return DensityOperator::from_unnormalized(dims, rho);
}

DensityOperator random_density(BipartiteDims dims, std::uint64_t seed, int mix_count) {
  Rng rng = make_rng(seed);
  return random_density(dims, rng, mix_count);
}

DensityOperator random_separable(BipartiteDims dims, Rng& rng, int mix_count) {
  if (mix_count < 1) throw InvalidInputError("random_separable: mix_count must be >= 1");
  const RVector w = uniform_simplex(rng, mix_count);
  CMatrix rho = CMatrix::Zero(dims.total(), dims.total());
  for (int k = 0; k < mix_count; ++k) {
    const CVector a = complex_gaussian(rng, dims.d1).normalized();
    const CVector b = complex_gaussian(rng, dims.d2).normalized();
    const CVector ab = kron(a, b);
    rho += w(k) * ab * ab.adjoint();
  }
  return DensityOperator::from_unnormalized(dims, rho);
}

// ---------------------------------------------------------------------------

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

double max_hermitian_deviation(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

CVector phase_aligned(const CVector& v) {
  if (v.size() == 0) return v;
  Eigen::Index best = 0;
  double mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // Ties resolved toward the lowest index, with slack so that rounding
    // noise does not flip the reference component.
    if (std::abs(v(i)) > mag + 1e-12) {
      mag = std::abs(v(i));
      best = i;
    }
  }
  if (mag <= 0.0) return v;
  return v * (std::conj(v(best)) / mag);
}

double fidelity(const CVector& a, const CVector& b) {
  return std::norm(a.dot(b));
}

double min_eigenvalue(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

}  // namespace schmidtnum
