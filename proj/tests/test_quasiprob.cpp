// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "schmidtnum/errors.hpp"
#include "schmidtnum/hilbert.hpp"
#include "schmidtnum/locc.hpp"
#include "schmidtnum/nnls.hpp"
#include "schmidtnum/quasiprob.hpp"
#include "schmidtnum/witness.hpp"

using namespace schmidtnum;

namespace {

DensityOperator isotropic(int d, double f) {
  const BipartiteDims dims(d, d);
  const int n = d * d;
  const CMatrix p = phi_r(d, dims).projector();
  const CMatrix rest = (CMatrix::Identity(n, n) - p) / (n - 1.0);
  return DensityOperator(dims, f * p + (1.0 - f) * rest);
}

CMatrix rebuild(const QuasiProbability& qp) {
  const int n = qp.chi.front().dims().total();
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < qp.chi.size(); ++k)
    out += qp.weights(static_cast<Eigen::Index>(k)) * qp.chi[k].projector();
  return out;
}

}  // namespace

TEST_CASE("product projector: one component with weight 1") {
  const BipartiteDims d(2, 2);
  CVector v = CVector::Zero(4);
  v(0) = 1.0;
  const DensityOperator rho = DensityOperator::from_pure(PureState(d, v));
  const QuasiProbability qp = build_quasiprob(rho, 1, SolverConfig{});
  CHECK(qp.complete);
  CHECK(qp.reconstruction_residual < 1e-10);
  int heavy = 0;
  for (Eigen::Index k = 0; k < qp.weights.size(); ++k) {
    if (std::abs(qp.weights(k)) < 1e-8) continue;
    ++heavy;
    CHECK(qp.weights(k) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fidelity(qp.chi[k].amplitudes(), v) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(heavy == 1);
  CHECK(estimate_schmidt_number(rho, SolverConfig{}).upper == 1);
}

TEST_CASE("phi_2 is negative at r = 1 and a clean mixture at r = 2") {
  const BipartiteDims d(2, 2);
  const DensityOperator rho = DensityOperator::from_pure(phi_r(2, d));
  const QuasiProbability q1 = build_quasiprob(rho, 1, SolverConfig{});
  CHECK(q1.complete);
  CHECK(q1.reconstruction_residual <= 1e-6);
  CHECK(q1.min_weight < -1e-6);
  CHECK((rebuild(q1) - rho.matrix()).norm() <= 1e-6);

  const QuasiProbability q2 = build_quasiprob(rho, 2, SolverConfig{});
  CHECK(q2.complete);
  CHECK(q2.min_weight >= -1e-8);
}

TEST_CASE("lambda identity and gram entries") {
  const DensityOperator rho = random_density(BipartiteDims(2, 3), 4, 2);
  const QuasiProbability qp = build_quasiprob(rho, 1, SolverConfig{});
  REQUIRE(!qp.chi.empty());
  for (std::size_t k = 0; k < qp.chi.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    CHECK(std::abs(qp.lambdas(kk) - qp.chi[k].amplitudes().dot(rho.matrix() * qp.chi[k].amplitudes()).real()) < 1e-8);
    for (std::size_t l = 0; l < qp.chi.size(); ++l) {
      const double f = fidelity(qp.chi[k].amplitudes(), qp.chi[l].amplitudes());
      CHECK(std::abs(qp.gram(kk, static_cast<Eigen::Index>(l)) - f) < 1e-12);
    }
  }
  const SolveResult sr = solve_rse(Observable(rho.dims(), rho.matrix()), 1, SolverConfig{});
  for (const auto& s : sr.solutions)
    CHECK(std::abs(expectation(PureState(rho.dims(), s.state), Observable(rho.dims(), rho.matrix())) -
                   s.lambda) < 1e-8);
}

TEST_CASE("schmidt number readout on states with known value") {
  const SolverConfig cfg;
  const BipartiteDims d3(3, 3);
  const SchmidtNumberEstimate e_phi3 =
      estimate_schmidt_number(DensityOperator::from_pure(phi_r(3, d3)), cfg);
  CHECK(e_phi3.exact());
  CHECK(e_phi3.upper == 3);
  CHECK(e_phi3.upper == schmidt_rank(phi_r(3, d3)));

  const DensityOperator mixed(d3, CMatrix::Identity(9, 9) / 9.0);
  const SchmidtNumberEstimate e_id = estimate_schmidt_number(mixed, cfg);
  CHECK(e_id.upper == 1);
  REQUIRE(!e_id.levels.empty());
  CHECK(e_id.levels.front().min_weight >= -1e-6);

  // Isotropic states: Schmidt number ceil(F d).
  struct Case {
    int d;
    double f;
    int expect;
  };
  for (const Case c : {Case{2, 0.45, 1}, Case{2, 0.7, 2}, Case{3, 0.3, 1}, Case{3, 0.5, 2},
                       Case{3, 0.8, 3}}) {
    CAPTURE(c.f);
    const SchmidtNumberEstimate e = estimate_schmidt_number(isotropic(c.d, c.f), cfg);
    CHECK(e.exact());
    CHECK(e.upper == c.expect);
  }

  Rng rng = make_rng(3);
  RVector coeffs(2);
  coeffs << 0.9, 0.3;
  const PureState psi = random_pure_with_coefficients(BipartiteDims(2, 3), coeffs, rng);
  const SchmidtNumberEstimate e_psi =
      estimate_schmidt_number(DensityOperator::from_pure(psi), cfg);
  CHECK(e_psi.exact());
  CHECK(e_psi.upper == 2);
}

TEST_CASE("nonnegativity is monotone in r") {
  const SolverConfig cfg;
  const DensityOperator rho = isotropic(3, 0.5);
  bool seen = false;
  for (int r = 1; r <= 3; ++r) {
    const QuasiProbability qp = build_quasiprob(rho, r, cfg);
    if (!qp.complete) continue;
    if (seen) CHECK(qp.nonnegative());
    seen = seen || qp.nonnegative();
  }
  CHECK(seen);
}

TEST_CASE("witness certification is never contradicted by a clean distribution") {
  const SolverConfig cfg;
  const BipartiteDims d(3, 3);
  for (const double p : {0.7, 0.85, 1.0}) {
    const CMatrix m = p * phi_r(3, d).projector() + (1.0 - p) * CMatrix::Identity(9, 9) / 9.0;
    const DensityOperator rho(d, m);
    const Observable L(d, m);
    for (int r = 1; r <= 2; ++r) {
      const WitnessCertificate cert = certify_schmidt_number(rho, L, r, cfg, {.oracle_samples = 0});
      if (cert.verdict != Verdict::kCertifiedAboveR) continue;
      const QuasiProbability qp = build_quasiprob(rho, r, cfg);
      CHECK(!(qp.complete && qp.nonnegative()));
    }
  }
}

TEST_CASE("pseudomixture") {
  const SolverConfig cfg;
  const BipartiteDims d(2, 2);
  CVector singlet = CVector::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  const DensityOperator rho = DensityOperator::from_pure(PureState(d, singlet));
  const QuasiProbability qp = build_quasiprob(rho, 1, cfg);
  REQUIRE(qp.complete);
  const Pseudomixture pm = pseudomixture(qp);
  CHECK(pm.mu > 0.0);
  REQUIRE(pm.sigma_prime.has_value());
  const CMatrix back = (1.0 + pm.mu) * pm.sigma.matrix() - pm.mu * pm.sigma_prime->matrix();
  CHECK((back - rho.matrix()).norm() <= 1e-6);
  CHECK(std::abs(pm.sigma.matrix().trace() - 1.0) < 1e-8);
  CHECK(std::abs(pm.sigma_prime->matrix().trace() - 1.0) < 1e-8);

  const DensityOperator mixed(d, CMatrix::Identity(4, 4) / 4.0);
  const QuasiProbability qs = build_quasiprob(mixed, 1, cfg);
  REQUIRE(qs.complete);
  REQUIRE(qs.nonnegative());
  const Pseudomixture ps = pseudomixture(qs);
  CHECK(ps.mu < 1e-6);
  CHECK((ps.sigma.matrix() - mixed.matrix()).norm() < 1e-6);
}

TEST_CASE("incomplete fits are flagged, and require_complete throws") {
  // A generic full-rank 2x2 state has too few product r-SEs to span it.
  const DensityOperator rho = random_density(BipartiteDims(2, 2), 3, 4);
  const QuasiProbability qp = build_quasiprob(rho, 1, SolverConfig{});
  CHECK(!qp.complete);
  CHECK(qp.reconstruction_residual > 1e-6);
  CHECK_THROWS_AS(require_complete(qp), IncompleteBasisError);
  const SchmidtNumberEstimate e = estimate_schmidt_number(rho, SolverConfig{});
  CHECK(e.failed_level == 1);
  CHECK(e.lower <= e.upper);
}

TEST_CASE("fit_quasiprob on a hand-made basis") {
  const BipartiteDims d(2, 2);
  std::vector<PureState> chi;
  for (int k = 0; k < 4; ++k) {
    CVector v = CVector::Zero(4);
    v(k) = 1.0;
    chi.push_back(PureState(d, v));
  }
  CMatrix m = CMatrix::Zero(4, 4);
  m.diagonal() << 0.1, 0.2, 0.3, 0.4;
  const QuasiProbability qp = fit_quasiprob(DensityOperator(d, m), 1, chi);
  CHECK(qp.complete);
  for (int k = 0; k < 4; ++k) CHECK(qp.weights(k) == doctest::Approx(0.1 * (k + 1)).epsilon(1e-10));
}

TEST_CASE("nnls") {
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  Eigen::VectorXd b(3);
  b << -1, 2, 1;
  const NnlsResult r = nnls(a, b);
  CHECK(r.x.minCoeff() >= 0.0);
  // Unconstrained optimum has x0 < 0; with x0 = 0 the best x1 is 1.5.
  CHECK(r.x(0) == doctest::Approx(0.0));
  CHECK(r.x(1) == doctest::Approx(1.5).epsilon(1e-12));
}
