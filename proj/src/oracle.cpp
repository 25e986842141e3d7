// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

// Brute-force lower bound for f12 that shares no code path with the solver:
// QR instead of SVD, power steps instead of eigendecompositions.

#include <cmath>
#include <limits>

#include "schmidtnum/errors.hpp"
#include "schmidtnum/se_solver.hpp"

namespace schmidtnum {

namespace {

constexpr int kOracleSteps = 50;

CMatrix orthonormal_columns(const CMatrix& v) {
  Eigen::HouseholderQR<CMatrix> qr(v);
  return qr.householderQ() * CMatrix::Identity(v.rows(), v.cols());
}

// Upper bound on the spectral radius.
double gershgorin(const CMatrix& a) {
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

// Stacks kron(I, q_k) or kron(q_k, I) side by side.
CMatrix isometry(const CMatrix& q, int other_dim, bool q_on_second) {
  const CMatrix id = CMatrix::Identity(other_dim, other_dim);
  const Eigen::Index n = q.rows() * other_dim;
  CMatrix e(n, q.cols() * other_dim);
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const CMatrix col = q.col(k);
    e.middleCols(k * other_dim, other_dim) = q_on_second ? kron(id, col) : kron(col, id);
  }
  return e;
}

}  // namespace

double oracle_f12_r(const Observable& L, int r, int samples, std::uint64_t seed) {
  const BipartiteDims dims = L.dims();
  if (samples < 1) throw InvalidInputError("oracle_f12_r: samples must be >= 1");
  if (r < 1 || r > dims.min_dim()) throw InvalidInputError("oracle_f12_r: r out of range");
  const CMatrix& lm = L.matrix();
  Rng rng = make_rng(seed, {0x0dac1eULL, static_cast<std::uint64_t>(r)});
  double best = -std::numeric_limits<double>::infinity();

  for (int s = 0; s < samples; ++s) {
    CMatrix x = complex_gaussian(rng, dims.d1, r);
    CMatrix y = complex_gaussian(rng, dims.d2, r);
    CVector psi = CVector::Zero(dims.total());
    for (int k = 0; k < r; ++k) psi += kron(CVector(x.col(k)), CVector(y.col(k)));
    psi.normalize();
    for (int step = 0; step < kOracleSteps; ++step) {
      const bool update_x = step % 2 == 0;
      const CMatrix q = orthonormal_columns(update_x ? y : x);
      const CMatrix e = isometry(q, update_x ? dims.d1 : dims.d2, update_x);
      const CMatrix a = e.adjoint() * lm * e;
      const double c = gershgorin(a);
      CVector z = e.adjoint() * psi;
      z = a * z + c * z;
      if (z.norm() == 0.0) break;
      z.normalize();
      psi = e * z;
      const Eigen::Index d = update_x ? dims.d1 : dims.d2;
      for (int k = 0; k < r; ++k) {
        if (update_x) {
          x.col(k) = z.segment(k * d, d);
          y.col(k) = q.col(k);
        } else {
          y.col(k) = z.segment(k * d, d);
          x.col(k) = q.col(k);
        }
      }
      best = std::max(best, psi.dot(lm * psi).real() / psi.squaredNorm());
    }
  }
  return best;
}

}  // namespace schmidtnum
