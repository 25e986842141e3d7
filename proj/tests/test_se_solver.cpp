// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "schmidtnum/errors.hpp"
#include "schmidtnum/hilbert.hpp"
#include "schmidtnum/se_solver.hpp"

using namespace schmidtnum;

namespace {

// Closed-form observable shared with the offline BFGS oracle that produced the
// frozen values below.
Observable fixed_observable(int d1, int d2, int k) {
  const int n = d1 * d2;
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = Complex(std::sin(1.0 + i + 0.7 * k * j), std::cos(2.0 * i - j + k));
  return Observable(BipartiteDims(d1, d2), (m + m.adjoint()) / 2.0);
}

Observable random_observable(BipartiteDims d, Rng& rng) {
  const CMatrix g = complex_gaussian(rng, d.total(), d.total());
  return Observable(d, (g + g.adjoint()) / 2.0);
}

CMatrix coefficients(const CVector& v, BipartiteDims d) {
  CMatrix c(d.d1, d.d2);
  for (int i = 0; i < d.d1; ++i)
    for (int j = 0; j < d.d2; ++j) c(i, j) = v(i * d.d2 + j);
  return c;
}

// Both stationarity conditions written in the ansatz vectors:
// sum_j G(i, j) conj(y_k(j)) = 0 and sum_i conj(x_k(i)) G(i, j) = 0 with
// G the coefficient matrix of (L - lambda) psi.
double dual_residual(const Observable& L, const RSESolution& s) {
  const BipartiteDims d = L.dims();
  const CVector psi = s.ansatz.assemble();
  const CMatrix g = coefficients(L.matrix() * psi - s.lambda * psi, d);
  double worst = 0.0;
  for (int k = 0; k < static_cast<int>(s.ansatz.x_vectors.size()); ++k) {
    worst = std::max(worst, (g * s.ansatz.y_vectors[k].conjugate()).norm());
    worst = std::max(worst, (s.ansatz.x_vectors[k].adjoint() * g).norm());
  }
  return worst;
}

}  // namespace

TEST_CASE("frozen f12 values from the offline oracle") {
  struct Case {
    int d1, d2, r, k;
    double f12;
  };
  const Case cases[] = {
      {2, 2, 1, 1, 2.262537929115389}, {2, 3, 1, 2, 3.3070567159986846},
      {3, 3, 1, 3, 3.6806536451397696}, {3, 3, 2, 3, 3.8771694397278185},
      {3, 3, 2, 4, 3.883842896576058},  {2, 3, 2, 5, 2.459770670437136},
  };
  for (const auto& c : cases) {
    const Observable L = fixed_observable(c.d1, c.d2, c.k);
    CAPTURE(c.k);
    CHECK(f12_r(L, c.r, SolverConfig{}) == doctest::Approx(c.f12).epsilon(1e-8));
  }
}

TEST_CASE("f12 of maximally entangled projectors") {
  const SolverConfig cfg;
  const Observable p2 = Observable::projector(phi_r(2, BipartiteDims(2, 2)));
  const Observable p3 = Observable::projector(phi_r(3, BipartiteDims(3, 3)));
  CHECK(f12_r(p2, 1, cfg) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(f12_r(p3, 1, cfg) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(f12_r(p3, 2, cfg) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(f12_r(p3, 3, cfg) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("identity and product projectors") {
  const BipartiteDims d(2, 3);
  for (int r = 1; r <= 2; ++r)
    CHECK(f12_r(Observable::identity(d), r, SolverConfig{}) == doctest::Approx(1.0).epsilon(1e-12));

  CVector e0 = CVector::Zero(6);
  e0(0) = 1.0;
  const SolveResult res = solve_rse(Observable::projector(PureState(d, e0)), 1, SolverConfig{});
  REQUIRE(!res.solutions.empty());
  CHECK(res.solutions.front().lambda == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(res.solutions.front().state, e0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("f_max") {
  const BipartiteDims d(3, 3);
  CHECK(f_max(Observable::projector(phi_r(2, d))) == doctest::Approx(1.0).epsilon(1e-12));
  for (int r = 1; r <= 3; ++r)
    CHECK(f_max(swap_witness_V(r, d)) == doctest::Approx(1.0 / r).epsilon(1e-12));
}

TEST_CASE("block assembly") {
  Rng rng = make_rng(1);
  const BipartiteDims d(2, 3);
  const Observable L = random_observable(d, rng);
  for (int r = 1; r <= 2; ++r) {
    std::vector<CVector> ys;
    for (int k = 0; k < r; ++k) ys.push_back(complex_gaussian(rng, d.d2));
    const BlockSystem b = assemble_blocks(L, ys, Subsystem::kSecond);
    CHECK(b.blocks.rows() == r * d.d1);
    CHECK(max_hermitian_deviation(b.blocks) < 1e-12);
    CHECK(max_hermitian_deviation(b.gram) < 1e-12);
  }

  // r = 1 with a unit y: the block is tr_2[L (I (x) |y><y|)] computed entrywise.
  CVector y = complex_gaussian(rng, d.d2);
  y.normalize();
  const BlockSystem b = assemble_blocks(L, {y}, Subsystem::kSecond);
  CMatrix expect = CMatrix::Zero(d.d1, d.d1);
  for (int i = 0; i < d.d1; ++i)
    for (int k = 0; k < d.d1; ++k)
      for (int j = 0; j < d.d2; ++j)
        for (int l = 0; l < d.d2; ++l)
          expect(i, k) += std::conj(y(j)) * L.matrix()(i * d.d2 + j, k * d.d2 + l) * y(l);
  CHECK((b.blocks - expect).norm() < 1e-12);
  CHECK(std::abs(b.gram(0, 0) - 1.0) < 1e-12);

  const BlockSystem id = assemble_blocks(Observable::identity(d), {y, 2.0 * y}, Subsystem::kSecond);
  CHECK((id.blocks - kron(id.gram, CMatrix::Identity(d.d1, d.d1))).norm() < 1e-12);
}

TEST_CASE("solutions satisfy both stationarity equations and the gauge invariants") {
  Rng rng = make_rng(2);
  for (const BipartiteDims d : {BipartiteDims(2, 3), BipartiteDims(3, 3)}) {
    const Observable L = random_observable(d, rng);
    for (int r = 1; r <= d.min_dim(); ++r) {
      const SolveResult res = solve_rse(L, r, SolverConfig{});
      REQUIRE(!res.solutions.empty());
      for (std::size_t k = 1; k < res.solutions.size(); ++k)
        CHECK(res.solutions[k].lambda <= res.solutions[k - 1].lambda);
      for (const auto& s : res.solutions) {
        CHECK(s.residual <= 1e-8);
        CHECK(dual_residual(L, s) <= 1e-7);
        CHECK(std::abs(s.state.norm() - 1.0) < 1e-10);
        CHECK(std::abs(expectation(PureState(d, s.state), L) - s.lambda) < 1e-8);
        CHECK(max_hermitian_deviation(s.gram_x) < 1e-10);
        CHECK(min_eigenvalue(s.gram_x) >= -1e-10);
        CHECK(min_eigenvalue(s.gram_y) >= -1e-10);
        CHECK((s.ansatz.assemble() - s.state).norm() < 1e-10);
      }
      for (std::size_t a = 0; a < res.solutions.size(); ++a)
        for (std::size_t b = a + 1; b < res.solutions.size(); ++b)
          CHECK(fidelity(res.solutions[a].state, res.solutions[b].state) < 1.0 - 1e-6);
    }
  }
}

TEST_CASE("ascent is monotone per half-step") {
  Rng rng = make_rng(3);
  const BipartiteDims d(3, 3);
  const Observable L = random_observable(d, rng);
  for (int r = 1; r <= 2; ++r) {
    for (int restart = 0; restart < 8; ++restart) {
      const auto trace = ascent_trace(L, r, SolverConfig{}, restart);
      REQUIRE(trace.size() >= 2);
      for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] >= trace[k - 1] - 1e-12);
    }
  }
}

TEST_CASE("f12 grows with r and reaches f_max") {
  Rng rng = make_rng(4);
  for (const BipartiteDims d : {BipartiteDims(2, 2), BipartiteDims(3, 3), BipartiteDims(2, 4)}) {
    const Observable L = random_observable(d, rng);
    double prev = -std::numeric_limits<double>::infinity();
    for (int r = 1; r <= d.min_dim(); ++r) {
      const double v = f12_r(L, r, SolverConfig{});
      CHECK(v >= prev - 1e-9);
      CHECK(v <= f_max(L) + 1e-10);
      prev = v;
    }
    CHECK(prev == doctest::Approx(f_max(L)).epsilon(1e-8));
  }
}

TEST_CASE("r = 1 iteration agrees with the general solver") {
  Rng rng = make_rng(5);
  for (int t = 0; t < 5; ++t) {
    const Observable L = random_observable(BipartiteDims(2, 3), rng);
    const double a = se_solve_r1(L, SolverConfig{}).solutions.front().lambda;
    CHECK(a == doctest::Approx(f12_r(L, 1, SolverConfig{})).epsilon(1e-8));
  }
  // Product of positive operators: the maximum factorizes.
  const CMatrix ga = complex_gaussian(rng, 2, 2);
  const CMatrix gb = complex_gaussian(rng, 3, 3);
  const CMatrix A = ga * ga.adjoint();
  const CMatrix B = gb * gb.adjoint();
  const Observable L(BipartiteDims(2, 3), kron(A, B));
  const SolveResult r1 = se_solve_r1(L, SolverConfig{});
  CHECK(r1.solutions.front().lambda ==
        doctest::Approx(max_eigenvalue(A) * max_eigenvalue(B)).epsilon(1e-10));
  const Observable p2 = Observable::projector(phi_r(2, BipartiteDims(2, 2)));
  CHECK(se_solve_r1(p2, SolverConfig{}).solutions.front().lambda ==
        doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("solver oracle agrees and stays below f_max") {
  Rng rng = make_rng(6);
  const BipartiteDims d(3, 3);
  const Observable L = random_observable(d, rng);
  double prev = -std::numeric_limits<double>::infinity();
  for (int r = 1; r <= 3; ++r) {
    const double o = oracle_f12_r(L, r, 500, 7);
    CHECK(o <= f_max(L) + 1e-12);
    CHECK(f12_r(L, r, SolverConfig{}) >= o - 1e-8);
    CHECK(o >= prev - 1e-9);
    prev = o;
  }
  const Observable p2 = Observable::projector(phi_r(2, BipartiteDims(2, 2)));
  const double o = oracle_f12_r(p2, 1, 10000, 0);
  CHECK(o <= 0.5 + 1e-12);
  CHECK(o >= 0.5 - 1e-4);
}

TEST_CASE("determinism, thread independence and statistics") {
  Rng rng = make_rng(8);
  const Observable L = random_observable(BipartiteDims(3, 3), rng);
  SolverConfig cfg;
  cfg.seed = 17;
  const SolveResult a = solve_rse(L, 2, cfg);
  cfg.threads = 4;
  const SolveResult b = solve_rse(L, 2, cfg);
  REQUIRE(a.solutions.size() == b.solutions.size());
  for (std::size_t k = 0; k < a.solutions.size(); ++k) {
    CHECK(a.solutions[k].lambda == b.solutions[k].lambda);
    CHECK(a.solutions[k].state == b.solutions[k].state);
  }
  CHECK(a.stats.restarts == cfg.restarts);
  CHECK(a.stats.converged_runs <= a.stats.runs);
  CHECK(a.stats.unique_solutions == static_cast<int>(a.solutions.size()));
  CHECK(a.stats.rediscovery >= 0.0);
  CHECK(a.stats.rediscovery < 1.0);
}

TEST_CASE("errors") {
  const Observable L = Observable::identity(BipartiteDims(2, 3));
  CHECK_THROWS_AS(solve_rse(L, 0, SolverConfig{}), InvalidInputError);
  CHECK_THROWS_AS(solve_rse(L, 3, SolverConfig{}), InvalidInputError);
  SolverConfig bad;
  bad.tol_residual = 0.0;
  CHECK_THROWS_AS(solve_rse(L, 1, bad), InvalidInputError);

  Rng rng = make_rng(9);
  const Observable R = random_observable(BipartiteDims(3, 3), rng);
  SolverConfig tight;
  tight.max_iter = 1;
  try {
    solve_rse(R, 2, tight);
    FAIL("expected a convergence failure");
  } catch (const ConvergenceError& e) {
    CHECK(std::isfinite(e.best_residual()));
  }
}
