// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

#include "schmidtnum/quasiprob.hpp"

#include <cmath>
#include <sstream>

#include "schmidtnum/errors.hpp"
#include "schmidtnum/nnls.hpp"

namespace schmidtnum {

namespace {

constexpr double kGramCutoff = 1e-10;

// Real coordinates of a Hermitian matrix in which the Frobenius inner product
// is the Euclidean one: diagonal, then sqrt 2 Re and sqrt 2 Im of the upper
// triangle.
Eigen::VectorXd hermitian_coordinates(const CMatrix& h) {
  const Eigen::Index n = h.rows();
  Eigen::VectorXd v(n * n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) v(k++) = h(i, i).real();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      v(k++) = std::sqrt(2.0) * h(i, j).real();
      v(k++) = std::sqrt(2.0) * h(i, j).imag();
    }
  return v;
}

CMatrix weighted_sum(const std::vector<PureState>& chi, const RVector& w, int n) {
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t l = 0; l < chi.size(); ++l) {
    const CVector& c = chi[l].amplitudes();
    out.noalias() += w(static_cast<Eigen::Index>(l)) * (c * c.adjoint());
  }
  return out;
}

void append_unique(std::vector<PureState>& pool, const std::vector<RSESolution>& sols,
                   BipartiteDims dims, double overlap) {
  for (const auto& s : sols) {
    bool dup = false;
    for (const auto& p : pool) {
      if (fidelity(p.amplitudes(), s.state) >= overlap) {
        dup = true;
        break;
      }
    }
    if (!dup) pool.push_back(PureState::normalized(dims, s.state));
  }
}

}  // namespace

QuasiProbability fit_quasiprob(const DensityOperator& rho, int r, std::vector<PureState> chi) {
  const BipartiteDims dims = rho.dims();
  const int n = dims.total();
  QuasiProbability qp;
  qp.r = r;
  qp.chi = std::move(chi);
  const Eigen::Index m = static_cast<Eigen::Index>(qp.chi.size());
  if (m == 0) throw InvalidInputError("fit_quasiprob: no component vectors");

  CMatrix c(n, m);
  Eigen::MatrixXd a(n * n, m);
  for (Eigen::Index l = 0; l < m; ++l) {
    if (!(qp.chi[l].dims() == dims)) throw DimensionMismatchError("fit_quasiprob: dims differ");
    const CVector& v = qp.chi[l].amplitudes();
    c.col(l) = v;
    a.col(l) = hermitian_coordinates(v * v.adjoint());
  }
  qp.gram = (c.adjoint() * c).cwiseAbs2();
  qp.lambdas = (c.adjoint() * rho.matrix() * c).diagonal().real();

  // G = A^T A and lambda = A^T b for the design matrix A of projector
  // coordinates, so the min-norm solution of G p = lambda is A^+ b. Working
  // with A keeps the decomposition at d^2 rows however many vectors there are;
  // the cutoff on singular values of G becomes its square root on those of A.
  const Eigen::VectorXd b = hermitian_coordinates(rho.matrix());
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(std::sqrt(kGramCutoff));
  qp.weights = svd.solve(b);
  qp.reconstruction_residual = (weighted_sum(qp.chi, qp.weights, n) - rho.matrix()).norm();

  if (qp.weights.minCoeff() < kNegativityTolerance) {
    const NnlsResult fit = nnls(a, b);
    if (fit.residual <= kReconstructionTolerance) {
      qp.weights = fit.x;
      qp.reconstruction_residual = (weighted_sum(qp.chi, qp.weights, n) - rho.matrix()).norm();
      qp.nonnegative_refit = true;
    }
  }
  qp.min_weight = qp.weights.minCoeff();
  qp.complete = qp.reconstruction_residual <= kReconstructionTolerance;
  return qp;
}

QuasiProbability build_quasiprob(const DensityOperator& rho, int r, const SolverConfig& cfg) {
  cfg.validate();
  const BipartiteDims dims = rho.dims();
  const Observable L(dims, rho.matrix());
  std::vector<PureState> pool;
  QuasiProbability qp;
  for (int round = 0; round < cfg.discovery_rounds; ++round) {
    SolverConfig c = cfg;
    c.collect_candidates = true;
    c.seed = make_rng(cfg.seed, {0x9b0dULL, static_cast<std::uint64_t>(round)})();
    const SolveResult res = solve_rse(L, r, c);
    append_unique(pool, res.solutions, dims, cfg.dedupe_overlap);
    qp = fit_quasiprob(rho, r, pool);
    qp.discovery_rounds = round + 1;
    qp.stats = res.stats;
    if (qp.complete && qp.nonnegative()) break;
  }
  return qp;
}

void require_complete(const QuasiProbability& qp) {
  if (qp.complete) return;
  std::ostringstream msg;
  msg << "quasi-probability at r = " << qp.r << " is incomplete: reconstruction residual "
      << qp.reconstruction_residual << " > " << kReconstructionTolerance << " with "
      << qp.chi.size() << " r-SE vectors after " << qp.discovery_rounds << " discovery rounds";
  throw IncompleteBasisError(msg.str(), qp.reconstruction_residual);
}

SchmidtNumberEstimate estimate_schmidt_number(const DensityOperator& rho,
                                              const SolverConfig& cfg) {
  SchmidtNumberEstimate est;
  const int top = rho.dims().min_dim();
  est.upper = top;
  for (int r = 1; r <= top; ++r) {
    QuasiProbability qp = build_quasiprob(rho, r, cfg);
    const bool complete = qp.complete;
    const bool nonneg = qp.nonnegative();
    est.levels.push_back(std::move(qp));
    if (!complete) {
      if (est.failed_level == 0) est.failed_level = r;
      continue;
    }
    if (nonneg) {
      est.upper = r;
      break;
    }
    est.lower = r + 1;
  }
  if (est.lower > est.upper) est.lower = est.upper;
  return est;
}

Pseudomixture pseudomixture(const QuasiProbability& qp) {
  require_complete(qp);
  const BipartiteDims dims = qp.chi.front().dims();
  const int n = dims.total();
  CMatrix pos = CMatrix::Zero(n, n);
  CMatrix neg = CMatrix::Zero(n, n);
  double mu = 0.0;
  for (std::size_t l = 0; l < qp.chi.size(); ++l) {
    const double p = qp.weights(static_cast<Eigen::Index>(l));
    if (std::abs(p) < kWeightPrune) continue;
    const CVector& v = qp.chi[l].amplitudes();
    if (p > 0.0) {
      pos += p * (v * v.adjoint());
    } else {
      neg += -p * (v * v.adjoint());
      mu += -p;
    }
  }
  Pseudomixture out{mu, DensityOperator::from_unnormalized(dims, pos), std::nullopt};
  if (mu > 0.0) out.sigma_prime = DensityOperator::from_unnormalized(dims, neg);
  return out;
}

}  // namespace schmidtnum
