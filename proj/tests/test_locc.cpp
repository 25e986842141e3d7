// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "schmidtnum/errors.hpp"
#include "schmidtnum/hilbert.hpp"
#include "schmidtnum/locc.hpp"
#include "schmidtnum/quasiprob.hpp"

using namespace schmidtnum;

namespace {

double max_abs(const CMatrix& m) {
  return m.cwiseAbs().maxCoeff();
}

CMatrix diag_projector(int d, int r) {
  CMatrix p = CMatrix::Zero(d, d);
  for (int k = 0; k < r; ++k) p(k, k) = 1.0;
  return p;
}

}  // namespace

TEST_CASE("class invariants are enforced at construction") {
  const BipartiteDims d(2, 2);
  const CMatrix id = CMatrix::Identity(2, 2);
  CMatrix not_unitary = id;
  not_unitary(0, 0) = 2.0;
  CHECK_THROWS_AS(SeparableOperation(d, {{not_unitary, id}}, OperationClass::kLU),
                  OperationClassError);
  CHECK_NOTHROW(SeparableOperation(d, {{not_unitary, id}}, OperationClass::kLI));
  CHECK_THROWS_AS(SeparableOperation(d, {{diag_projector(2, 1), id}}, OperationClass::kLI),
                  OperationClassError);
  CHECK_THROWS_AS(SeparableOperation(d, {{not_unitary, id}}, OperationClass::kLP),
                  OperationClassError);
  CHECK_THROWS_AS(SeparableOperation(d, {{id, id}, {id, id}}, OperationClass::kLU),
                  OperationClassError);
  CHECK_THROWS_AS(SeparableOperation(d, {{CMatrix::Identity(3, 3), id}}, OperationClass::kGeneral),
                  DimensionMismatchError);
}

TEST_CASE("apply: identity, truncation of phi_3, unitary invariance of coefficients") {
  const BipartiteDims d(3, 3);
  const DensityOperator rho = random_density(d, 2, 3);
  CHECK(max_abs(apply(SeparableOperation::identity(d), rho).matrix() - rho.matrix()) < 1e-14);

  const DensityOperator phi3 = DensityOperator::from_pure(phi_r(3, d));
  const DensityOperator phi2 = apply(truncation_projection(2, d), phi3);
  CHECK(max_abs(phi2.matrix() - phi_r(2, d).projector()) < 1e-14);

  Rng rng = make_rng(3);
  const PureState psi = random_pure(d, rng);
  const SeparableOperation u = sample_operation(OperationClass::kLU, d, rng);
  const CVector moved = u.kraus(0) * psi.amplitudes();
  const RVector before = schmidt_decompose(psi).coefficients;
  const RVector after = schmidt_decompose(PureState::normalized(d, moved)).coefficients;
  CHECK((before - after).norm() < 1e-12);
}

TEST_CASE("annihilation is an error") {
  const BipartiteDims d(2, 2);
  CVector v = CVector::Zero(4);
  v(3) = 1.0;  // |1,1>
  const DensityOperator rho = DensityOperator::from_pure(PureState(d, v));
  CHECK_THROWS_AS(apply(truncation_projection(1, d), rho), AnnihilationError);
}

TEST_CASE("truncation trace before normalization is (r-1)/r") {
  const BipartiteDims d(4, 4);
  for (int r = 2; r <= 4; ++r) {
    const CMatrix out =
        apply_unnormalized(truncation_projection(r - 1, d), phi_r(r, d).projector());
    CHECK(out.trace().real() == doctest::Approx((r - 1.0) / r).epsilon(1e-14));
  }
  const DensityOperator rho = random_density(d, 8, 2);
  CHECK(max_abs(apply(truncation_projection(4, d), rho).matrix() - rho.matrix()) < 1e-14);
  CHECK_THROWS_AS(truncation_projection(5, d), InvalidInputError);
  CHECK_THROWS_AS(truncation_projection(0, d), InvalidInputError);
}

TEST_CASE("compose respects application order and tags") {
  Rng rng = make_rng(21);
  const BipartiteDims d(2, 3);
  for (int t = 0; t < 50; ++t) {
    const auto a = sample_operation(static_cast<OperationClass>(t % 4), d, rng);
    const auto b = sample_operation(static_cast<OperationClass>((t / 4) % 4), d, rng);
    const DensityOperator rho = random_density(d, rng, 3);
    try {
      const DensityOperator two_step = apply(a, apply(b, rho));
      CHECK(max_abs(apply(compose(a, b), rho).matrix() - two_step.matrix()) < 1e-10);
    } catch (const AnnihilationError&) {
    }
    CHECK(max_abs(apply(compose(a, SeparableOperation::identity(d)), rho).matrix() -
                  apply(a, rho).matrix()) < 1e-12);
  }
  const auto lu = sample_operation(OperationClass::kLU, d, rng);
  const auto li = sample_operation(OperationClass::kLI, d, rng);
  const auto lp = sample_operation(OperationClass::kLP, d, rng);
  CHECK(compose(lu, lu).class_tag() == OperationClass::kLU);
  CHECK(compose(li, li).class_tag() == OperationClass::kLI);
  CHECK(compose(li, lu).class_tag() == OperationClass::kLI);
  CHECK(compose(lp, lp).class_tag() == OperationClass::kGeneral);
  CHECK(compose(lp, li).class_tag() == OperationClass::kGeneral);
}

TEST_CASE("invert round trips and rejects bad inputs") {
  Rng rng = make_rng(4);
  const BipartiteDims d(3, 2);
  const auto id = SeparableOperation::identity(d);
  CHECK(max_abs(invert(id).pairs()[0].A - id.pairs()[0].A) < 1e-15);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto op = sample_operation(OperationClass::kLI, d, rng);
    const DensityOperator rho = random_density(d, rng, 1 + t % 6);
    worst = std::max(worst, max_abs(apply(invert(op), apply(op, rho)).matrix() - rho.matrix()));
    const auto twice = invert(invert(op));
    CHECK(max_abs(twice.pairs()[0].A - op.pairs()[0].A) < 1e-8);
    CHECK(max_abs(twice.pairs()[0].B - op.pairs()[0].B) < 1e-8);
  }
  CHECK(worst < 1e-8);

  CHECK_THROWS_AS(invert(sample_operation(OperationClass::kLP, d, rng)), OperationClassError);
  CHECK_THROWS_AS(invert(sample_operation(OperationClass::kGeneral, d, rng)), OperationClassError);
  CMatrix a = CMatrix::Identity(3, 3);
  a(2, 2) = 1e-9;
  const SeparableOperation bad(d, {{a, CMatrix::Identity(2, 2)}}, OperationClass::kLI);
  CHECK_THROWS_AS(invert(bad), IllConditionedError);
}

TEST_CASE("local filter T maps phi_r to the prescribed state") {
  const BipartiteDims d(2, 2);
  const CMatrix id = CMatrix::Identity(2, 2);
  RVector lam(2);
  lam << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const DensityOperator phi2 = DensityOperator::from_pure(phi_r(2, d));
  CHECK(max_abs(apply(local_filter_T(id, id, lam, 2), phi2).matrix() - phi2.matrix()) < 1e-14);

  lam << std::sqrt(0.9), std::sqrt(0.1);
  const SeparableOperation t = local_filter_T(id, id, lam, 2);
  CHECK(t.class_tag() == OperationClass::kLI);
  const CVector out = t.kraus(0) * phi_r(2, d).amplitudes();
  const SchmidtDecomposition sd = schmidt_decompose(PureState::normalized(d, out));
  REQUIRE(sd.rank == 2);
  CHECK(sd.coefficients(0) == doctest::Approx(std::sqrt(0.9)).epsilon(1e-12));
  CHECK(sd.coefficients(1) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));

  Rng rng = make_rng(6);
  const BipartiteDims d3(3, 4);
  RVector l3(2);
  l3 << 0.6, 0.8;
  const SeparableOperation t3 =
      local_filter_T(haar_unitary(rng, 3), haar_unitary(rng, 4), l3, 2);
  CHECK(schmidt_rank(PureState::normalized(d3, t3.kraus(0) * phi_r(2, d3).amplitudes())) == 2);

  lam << 1.0, 0.0;
  CHECK_THROWS_AS(local_filter_T(id, id, lam, 2), InvalidInputError);
}

TEST_CASE("generator kraus reproduces the ensemble") {
  const BipartiteDims d(2, 2);
  CVector zero = CVector::Zero(4);
  zero(0) = 1.0;
  const Ensemble single(RVector::Ones(1), {PureState(d, zero)});
  const SeparableOperation op = generator_kraus(phi_r(2, d), single);
  const CVector image = op.kraus(0) * phi_r(2, d).amplitudes();
  CHECK((image - zero).norm() < 1e-12);
  CHECK(std::abs(std::abs(op.pairs()[0].A(0, 0)) - std::sqrt(2.0)) < 1e-12);

  Rng rng = make_rng(12);
  const BipartiteDims d3(3, 3);
  RVector c(2);
  c << 0.7, 0.4;
  const PureState gen = random_pure_with_coefficients(d3, c, rng);
  std::vector<PureState> members;
  for (int k = 0; k < 3; ++k)
    members.push_back(random_pure_with_coefficients(d3, RVector::Ones(1 + k % 2), rng));
  const RVector w = uniform_simplex(rng, 3);
  const Ensemble ens(w, members);
  const SeparableOperation g = generator_kraus(gen, ens);
  for (int k = 0; k < 3; ++k) {
    const CVector img = g.kraus(k) * gen.amplitudes();
    CHECK((img - std::sqrt(w(k)) * members[k].amplitudes()).norm() < 1e-8);
  }
  CHECK(max_abs(apply(g, DensityOperator::from_pure(gen)).matrix() - ens.mixture().matrix()) <
        1e-8);

  const Ensemble too_big(RVector::Ones(1), {phi_r(3, d3)});
  CHECK_THROWS_AS(generator_kraus(gen, too_big), RankError);

  const Ensemble self(RVector::Ones(1), {gen});
  const CVector same = generator_kraus(gen, self).kraus(0) * gen.amplitudes();
  CHECK((same - gen.amplitudes()).norm() < 1e-10);
}

TEST_CASE("sampling is deterministic and respects the class") {
  const BipartiteDims d(3, 3);
  for (const auto tag : {OperationClass::kLU, OperationClass::kLI, OperationClass::kLP,
                         OperationClass::kGeneral}) {
    const auto a = sample_operation(tag, d, 99);
    const auto b = sample_operation(tag, d, 99);
    CHECK(a.class_tag() == tag);
    REQUIRE(a.pairs().size() == b.pairs().size());
    for (std::size_t k = 0; k < a.pairs().size(); ++k) CHECK(a.pairs()[k].A == b.pairs()[k].A);
  }
  Rng rng = make_rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto li = sample_operation(OperationClass::kLI, d, rng);
    Eigen::JacobiSVD<CMatrix> svd(li.pairs()[0].A);
    CHECK(svd.singularValues().minCoeff() >= 0.2 - 1e-12);
    CHECK(svd.singularValues().maxCoeff() <= 5.0 + 1e-12);
  }
}

TEST_CASE("separable states stay PPT under sampled GENERAL operations") {
  Rng rng = make_rng(31);
  const BipartiteDims d(2, 3);
  for (int t = 0; t < 200; ++t) {
    const DensityOperator sigma = random_separable(d, rng, 1 + t % 4);
    const auto op = sample_operation(OperationClass::kGeneral, d, rng);
    CHECK(min_eigenvalue(partial_transpose(apply(op, sigma))) >= -1e-10);
  }
}

TEST_CASE("separable images keep a nonnegative r = 1 quasi-probability where complete") {
  Rng rng = make_rng(32);
  const BipartiteDims d(2, 2);
  SolverConfig cfg;
  cfg.restarts = 16;
  int complete = 0;
  for (int t = 0; t < 20; ++t) {
    const DensityOperator sigma = random_separable(d, rng, 1 + t % 3);
    const auto op = sample_operation(OperationClass::kGeneral, d, rng);
    const QuasiProbability qp = build_quasiprob(apply(op, sigma), 1, cfg);
    if (!qp.complete) continue;
    ++complete;
    CHECK(qp.min_weight >= -1e-6);
  }
  MESSAGE("complete fits: " << complete << " / 20");
}

TEST_CASE("schmidt rank is unchanged by LI and never raised by LP") {
  Rng rng = make_rng(41);
  const BipartiteDims d(3, 3);
  for (int t = 0; t < 100; ++t) {
    const PureState psi = random_pure_with_coefficients(d, RVector::Ones(1 + t % 3), rng);
    const auto li = sample_operation(OperationClass::kLI, d, rng);
    const CVector a = li.kraus(0) * psi.amplitudes();
    CHECK(schmidt_rank(PureState::normalized(d, a)) == schmidt_rank(psi));
    for (int r = 1; r <= 3; ++r) {
      const CVector b = truncation_projection(r, d).kraus(0) * psi.amplitudes();
      if (b.norm() < 1e-7) continue;
      CHECK(schmidt_rank(PureState::normalized(d, b)) <= schmidt_rank(psi));
    }
  }
}

TEST_CASE("operation class names round trip") {
  for (const auto tag : {OperationClass::kLU, OperationClass::kLI, OperationClass::kLP,
                         OperationClass::kGeneral})
    CHECK(parse_operation_class(to_string(tag)) == tag);
  CHECK_THROWS_AS(parse_operation_class("LOCC"), InvalidInputError);
}
