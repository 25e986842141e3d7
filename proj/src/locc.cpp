// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

#include "schmidtnum/locc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "schmidtnum/errors.hpp"

namespace schmidtnum {

namespace {

constexpr double kClassTol = 1e-10;

double unitarity_deviation(const CMatrix& m) {
  return (m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
}

double projector_deviation(const CMatrix& m) {
  return std::max((m * m - m).cwiseAbs().maxCoeff(), max_hermitian_deviation(m));
}

RVector singular_values(const CMatrix& m) {
  return Eigen::JacobiSVD<CMatrix>(m).singularValues();
}

double condition_number(const CMatrix& m) {
  const RVector s = singular_values(m);
  return s(0) / s(s.size() - 1);
}

CMatrix random_projector(Rng& rng, int d) {
  const int rank = uniform_int(rng, 1, d);
  const CMatrix u = haar_unitary(rng, d);
  return u.leftCols(rank) * u.leftCols(rank).adjoint();
}

CMatrix random_invertible(Rng& rng, int d) {
  const CMatrix u = haar_unitary(rng, d);
  const CMatrix v = haar_unitary(rng, d);
  RVector s(d);
  for (int k = 0; k < d; ++k) s(k) = uniform_real(rng, 0.2, 5.0);
  return u * s.cast<Complex>().asDiagonal() * v;
}

}  // namespace

std::string to_string(OperationClass c) {
  switch (c) {
    case OperationClass::kLU: return "LU";
    case OperationClass::kLI: return "LI";
    case OperationClass::kLP: return "LP";
    case OperationClass::kGeneral: return "GENERAL";
  }
  return "GENERAL";
}

OperationClass parse_operation_class(const std::string& s) {
  if (s == "LU") return OperationClass::kLU;
  if (s == "LI") return OperationClass::kLI;
  if (s == "LP") return OperationClass::kLP;
  if (s == "GENERAL") return OperationClass::kGeneral;
  throw InvalidInputError("operation class must be one of LU, LI, LP, GENERAL; got '" + s + "'");
}

SeparableOperation::SeparableOperation(BipartiteDims dims, std::vector<LocalOperatorPair> pairs,
                                       OperationClass tag)
    : dims_(dims), pairs_(std::move(pairs)), tag_(tag) {
  if (pairs_.empty()) throw InvalidInputError("separable operation: empty pair list");
  for (const auto& p : pairs_) {
    if (p.A.rows() != dims_.d1 || p.A.cols() != dims_.d1 || p.B.rows() != dims_.d2 ||
        p.B.cols() != dims_.d2) {
      throw DimensionMismatchError("separable operation: local operator shapes do not match dims");
    }
    if (!p.A.allFinite() || !p.B.allFinite())
      throw InvalidInputError("separable operation: non-finite entry");
  }
  if (tag_ == OperationClass::kGeneral) return;
  if (pairs_.size() != 1) {
    throw OperationClassError(to_string(tag_) + " operation must have exactly one pair, got " +
                              std::to_string(pairs_.size()));
  }
  const auto& p = pairs_.front();
  std::ostringstream msg;
  msg.precision(3);
  msg << std::scientific;
  switch (tag_) {
    case OperationClass::kLU: {
      const double dev = std::max(unitarity_deviation(p.A), unitarity_deviation(p.B));
      if (dev > kClassTol) {
        msg << "LU operation: local factor not unitary, deviation " << dev;
        throw OperationClassError(msg.str());
      }
      break;
    }
    case OperationClass::kLI: {
      const double smin = std::min(singular_values(p.A).minCoeff(), singular_values(p.B).minCoeff());
      if (smin <= kClassTol) {
        msg << "LI operation: local factor singular, smallest singular value " << smin;
        throw OperationClassError(msg.str());
      }
      break;
    }
    case OperationClass::kLP: {
      const double dev = std::max(projector_deviation(p.A), projector_deviation(p.B));
      if (dev > kClassTol) {
        msg << "LP operation: local factor not an orthogonal projector, deviation " << dev;
        throw OperationClassError(msg.str());
      }
      break;
    }
    case OperationClass::kGeneral: break;
  }
}

SeparableOperation SeparableOperation::identity(BipartiteDims dims) {
  return SeparableOperation(
      dims, {{CMatrix::Identity(dims.d1, dims.d1), CMatrix::Identity(dims.d2, dims.d2)}},
      OperationClass::kLU);
}

CMatrix SeparableOperation::kraus(std::size_t i) const {
  return kron(pairs_.at(i).A, pairs_.at(i).B);
}

CMatrix apply_unnormalized(const SeparableOperation& op, const CMatrix& m) {
  if (m.rows() != op.dims().total() || m.cols() != op.dims().total())
    throw DimensionMismatchError("apply: operator and state dims differ");
  CMatrix out = CMatrix::Zero(m.rows(), m.cols());
  for (std::size_t i = 0; i < op.pairs().size(); ++i) {
    const CMatrix k = op.kraus(i);
    out.noalias() += k * m * k.adjoint();
  }
  return out;
}

DensityOperator apply(const SeparableOperation& op, const DensityOperator& rho) {
  if (!(op.dims() == rho.dims())) throw DimensionMismatchError("apply: dims differ");
  CMatrix out = apply_unnormalized(op, rho.matrix());
  const double tr = out.trace().real();
  if (!(tr > kAnnihilationThreshold)) throw AnnihilationError(tr);
  out = 0.5 * (out + out.adjoint()).eval() / tr;
  return DensityOperator(rho.dims(), std::move(out));
}

SeparableOperation compose(const SeparableOperation& op1, const SeparableOperation& op2) {
  if (!(op1.dims() == op2.dims())) throw DimensionMismatchError("compose: dims differ");
  std::vector<LocalOperatorPair> pairs;
  pairs.reserve(op1.pairs().size() * op2.pairs().size());
  for (const auto& p1 : op1.pairs())
    for (const auto& p2 : op2.pairs()) pairs.push_back({p1.A * p2.A, p1.B * p2.B});

  const auto t1 = op1.class_tag();
  const auto t2 = op2.class_tag();
  auto invertible = [](OperationClass t) {
    return t == OperationClass::kLU || t == OperationClass::kLI;
  };
  OperationClass tag = OperationClass::kGeneral;
  if (t1 == OperationClass::kLU && t2 == OperationClass::kLU) {
    tag = OperationClass::kLU;
  } else if (invertible(t1) && invertible(t2)) {
    tag = OperationClass::kLI;
  }
  if (tag != OperationClass::kGeneral) {
    // Rounding can push a product of unitaries just past the LU check.
    try {
      return SeparableOperation(op1.dims(), pairs, tag);
    } catch (const OperationClassError&) {
      if (tag == OperationClass::kLU) return SeparableOperation(op1.dims(), pairs, OperationClass::kLI);
      throw;
    }
  }
  return SeparableOperation(op1.dims(), std::move(pairs), OperationClass::kGeneral);
}

SeparableOperation invert(const SeparableOperation& op) {
  if (op.class_tag() != OperationClass::kLI && op.class_tag() != OperationClass::kLU) {
    throw OperationClassError("invert: operation is tagged " + to_string(op.class_tag()) +
                              ", expected LI");
  }
  const auto& p = op.pairs().front();
  if (op.class_tag() == OperationClass::kLU)
    return SeparableOperation(op.dims(), {{p.A.adjoint(), p.B.adjoint()}}, OperationClass::kLU);
  const double cond = std::max(condition_number(p.A), condition_number(p.B));
  if (cond > kMaxCondition) throw IllConditionedError(cond);
  CMatrix ai = p.A.fullPivLu().inverse();
  CMatrix bi = p.B.fullPivLu().inverse();
  return SeparableOperation(op.dims(), {{std::move(ai), std::move(bi)}}, OperationClass::kLI);
}

SeparableOperation local_filter_T(const CMatrix& U1, const CMatrix& U2, const RVector& lambdas,
                                  int r) {
  if (U1.rows() != U1.cols() || U2.rows() != U2.cols())
    throw DimensionMismatchError("local_filter_T: unitaries must be square");
  const BipartiteDims dims(static_cast<int>(U1.rows()), static_cast<int>(U2.rows()));
  if (r < 1 || r > dims.min_dim()) {
    throw InvalidInputError("local_filter_T: r = " + std::to_string(r) + " outside [1, " +
                            std::to_string(dims.min_dim()) + "]");
  }
  if (lambdas.size() != r)
    throw DimensionMismatchError("local_filter_T: need exactly r coefficients");
  if ((lambdas.array() <= 0.0).any())
    throw InvalidInputError("local_filter_T: coefficients must be > 0");
  const double dev = std::abs(lambdas.squaredNorm() - 1.0);
  if (dev > 1e-10) {
    std::ostringstream msg;
    msg << "local_filter_T: sum of squared coefficients deviates from 1 by " << dev;
    throw InvalidInputError(msg.str());
  }
  if (unitarity_deviation(U1) > kClassTol || unitarity_deviation(U2) > kClassTol)
    throw InvalidInputError("local_filter_T: U1 and U2 must be unitary");

  RVector diag = RVector::Ones(dims.d1);
  for (int k = 0; k < r; ++k) diag(k) = std::sqrt(static_cast<double>(r)) * lambdas(k);
  CMatrix a = U1 * diag.cast<Complex>().asDiagonal();
  return SeparableOperation(dims, {{std::move(a), U2}}, OperationClass::kLI);
}

SeparableOperation truncation_projection(int r, BipartiteDims dims) {
  if (r < 1 || r > dims.d1) {
    throw InvalidInputError("truncation_projection: r = " + std::to_string(r) + " outside [1, " +
                            std::to_string(dims.d1) + "]");
  }
  CMatrix p = CMatrix::Zero(dims.d1, dims.d1);
  for (int k = 0; k < r; ++k) p(k, k) = 1.0;
  return SeparableOperation(dims, {{std::move(p), CMatrix::Identity(dims.d2, dims.d2)}},
                            OperationClass::kLP);
}

SeparableOperation generator_kraus(const PureState& generator, const Ensemble& ensemble) {
  const BipartiteDims dims = generator.dims();
  const SchmidtDecomposition g = schmidt_decompose(generator);
  std::vector<LocalOperatorPair> pairs;
  for (std::size_t k = 0; k < ensemble.members.size(); ++k) {
    const auto& member = ensemble.members[k];
    if (!(member.dims() == dims)) throw DimensionMismatchError("generator_kraus: dims differ");
    const SchmidtDecomposition m = schmidt_decompose(member);
    if (m.rank > g.rank) {
      throw RankError("generator_kraus: member " + std::to_string(k) + " has Schmidt rank " +
                      std::to_string(m.rank) + " > generator rank " + std::to_string(g.rank));
    }
    const double sp = std::sqrt(ensemble.weights(static_cast<Eigen::Index>(k)));
    CMatrix a = CMatrix::Zero(dims.d1, dims.d1);
    CMatrix b = CMatrix::Zero(dims.d2, dims.d2);
    for (int n = 0; n < m.rank; ++n) {
      a += (sp * m.coefficients(n) / g.coefficients(n)) * m.left_basis.col(n) *
           g.left_basis.col(n).adjoint();
      b += m.right_basis.col(n) * g.right_basis.col(n).adjoint();
    }
    pairs.push_back({std::move(a), std::move(b)});
  }
  return SeparableOperation(dims, std::move(pairs), OperationClass::kGeneral);
}

SeparableOperation sample_operation(OperationClass tag, BipartiteDims dims, Rng& rng) {
  switch (tag) {
    case OperationClass::kLU:
      return SeparableOperation(dims, {{haar_unitary(rng, dims.d1), haar_unitary(rng, dims.d2)}},
                                tag);
    case OperationClass::kLI:
      return SeparableOperation(
          dims, {{random_invertible(rng, dims.d1), random_invertible(rng, dims.d2)}}, tag);
    case OperationClass::kLP:
      return SeparableOperation(
          dims, {{random_projector(rng, dims.d1), random_projector(rng, dims.d2)}}, tag);
    case OperationClass::kGeneral: {
      const int n = uniform_int(rng, 1, 4);
      std::vector<LocalOperatorPair> pairs;
      for (int i = 0; i < n; ++i) {
        CMatrix a = complex_gaussian(rng, dims.d1, dims.d1) / std::sqrt(2.0 * dims.d1);
        CMatrix b = complex_gaussian(rng, dims.d2, dims.d2) / std::sqrt(2.0 * dims.d2);
        pairs.push_back({std::move(a), std::move(b)});
      }
      return SeparableOperation(dims, std::move(pairs), tag);
    }
  }
  throw InvalidInputError("sample_operation: unknown class");
}

SeparableOperation sample_operation(OperationClass tag, BipartiteDims dims, std::uint64_t seed) {
  Rng rng = make_rng(seed, {0x10cc});
  return sample_operation(tag, dims, rng);
}

std::vector<SeparableOperation> sample_family(OperationClass tag, BipartiteDims dims, int n,
                                              std::uint64_t seed, bool include_identity) {
  if (n < 0) throw InvalidInputError("sample_family: n must be >= 0");
  Rng rng = make_rng(seed, {0xfa3ULL, static_cast<std::uint64_t>(tag)});
  std::vector<SeparableOperation> out;
  if (include_identity) out.push_back(SeparableOperation::identity(dims));
  for (int i = 0; i < n; ++i) out.push_back(sample_operation(tag, dims, rng));
  return out;
}

SeparableOperation sample_two_branch_projection(BipartiteDims dims, Rng& rng) {
  const int rank = uniform_int(rng, 1, std::max(1, dims.d1 - 1));
  const CMatrix u = haar_unitary(rng, dims.d1);
  const CMatrix p = u.leftCols(rank) * u.leftCols(rank).adjoint();
  const CMatrix id1 = CMatrix::Identity(dims.d1, dims.d1);
  const CMatrix id2 = CMatrix::Identity(dims.d2, dims.d2);
  return SeparableOperation(dims, {{p, id2}, {id1 - p, id2}}, OperationClass::kGeneral);
}

}  // namespace schmidtnum
