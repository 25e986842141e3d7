// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

#include "schmidtnum/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "li_search.hpp"
#include "schmidtnum/errors.hpp"

namespace schmidtnum {

namespace {

constexpr double kNptThreshold = 1e-10;
constexpr double kNoiseFloor = 1e-12;

struct PtScore {
  double value;
  int r;
};

// max_r -tr(sigma V_r), NaN when the operation annihilates rho.
PtScore pt_score(const SeparableOperation& op, const DensityOperator& rho,
                 const std::vector<Observable>& vs) {
  CMatrix out = apply_unnormalized(op, rho.matrix());
  const double tr = out.trace().real();
  if (!(tr > kAnnihilationThreshold)) return {std::numeric_limits<double>::quiet_NaN(), 0};
  out /= tr;
  PtScore best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t k = 0; k < vs.size(); ++k) {
    const double v = -(out.transpose().array() * vs[k].matrix().array()).sum().real();
    if (v > best.value) best = {v, static_cast<int>(k) + 1};
  }
  return best;
}

}  // namespace

std::string to_string(Verdict v) {
  return v == Verdict::kCertifiedAboveR ? "CERTIFIED_ABOVE_R" : "INCONCLUSIVE";
}

WitnessCertificate certify_schmidt_number(const DensityOperator& rho, const Observable& L, int r,
                                          const SolverConfig& cfg, const WitnessOptions& opts) {
  if (!(rho.dims() == L.dims())) throw DimensionMismatchError("certify: dims differ");
  if (r < 1 || r >= rho.dims().min_dim()) {
    throw InvalidInputError("certify: r = " + std::to_string(r) + " outside [1, " +
                            std::to_string(rho.dims().min_dim() - 1) + "]");
  }
  SolverConfig c = cfg;
  c.collect_candidates = false;
  const SolveResult res = solve_rse(L, r, c);
  const double f12 = res.solutions.front().lambda;
  double oracle = std::numeric_limits<double>::quiet_NaN();
  double threshold = f12;
  if (opts.oracle_samples > 0) {
    oracle = oracle_f12_r(L, r, opts.oracle_samples, opts.oracle_seed);
    threshold = std::max(threshold, oracle);
  }
  const double expect = expectation(rho, L);
  const double margin = expect - threshold;
  return WitnessCertificate{
      .r = r,
      .observable = L,
      .f12_r_value = f12,
      .oracle_value = oracle,
      .expectation_value = expect,
      .margin = margin,
      .verdict = margin > opts.threshold ? Verdict::kCertifiedAboveR : Verdict::kInconclusive,
      .stats = res.stats,
  };
}

NptResult is_npt(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(partial_transpose(rho));
  NptResult out;
  out.min_eigenvalue = es.eigenvalues()(0);
  out.eigenvector = es.eigenvectors().col(0);
  out.npt = out.min_eigenvalue < -kNptThreshold;
  return out;
}

EptResult e_pt_lower_bound(const DensityOperator& rho, const SearchConfig& search) {
  const BipartiteDims dims = rho.dims();
  if (dims.min_dim() < 2) throw InvalidInputError("e_pt_lower_bound: needs min(d1, d2) >= 2");
  std::vector<Observable> vs;
  for (int r = 1; r <= dims.min_dim(); ++r) vs.push_back(swap_witness_V(r, dims));

  auto framed = [&](const SeparableOperation& op) {
    return search.frame ? compose(op, *search.frame) : op;
  };
  EptResult out;
  out.raw = -std::numeric_limits<double>::infinity();
  auto consider = [&](const SeparableOperation& op) {
    const PtScore s = pt_score(framed(op), rho, vs);
    ++out.evaluated;
    if (!std::isnan(s.value) && s.value > out.raw) {
      out.raw = s.value;
      out.best_r = s.r;
      out.best_operation = op;
    }
    return s.value;
  };

  Rng rng = make_rng(search.seed, {0xe97ULL});
  std::vector<detail::FilterCandidate> filters;
  const SeparableOperation id = SeparableOperation::identity(dims);
  filters.push_back({id, consider(id)});
  for (int i = 0; i < search.li_samples; ++i) {
    SeparableOperation op = sample_operation(OperationClass::kLI, dims, rng);
    const double v = consider(op);
    filters.push_back({std::move(op), v});
  }
  for (int i = 0; i < search.lp_samples; ++i)
    consider(sample_operation(OperationClass::kLP, dims, rng));

  std::stable_sort(filters.begin(), filters.end(),
                   [](const auto& a, const auto& b) { return a.value > b.value; });
  const auto objective = [&](const SeparableOperation& op) { return consider(op); };
  const int refine = std::min<int>(search.refine, static_cast<int>(filters.size()));
  for (int i = 0; i < refine; ++i) detail::refine_filter(filters[i], objective, search.sweeps);

  out.value = out.raw < kNoiseFloor ? 0.0 : out.raw;
  return out;
}

double witness_measure_lower_bound(const DensityOperator& rho,
                                   const std::vector<Observable>& family, int r,
                                   const SolverConfig& cfg) {
  double best = 0.0;
  for (const auto& L : family) {
    if (!(L.dims() == rho.dims())) throw DimensionMismatchError("witness measure: dims differ");
    best = std::max(best, expectation(rho, L) - f12_r(L, r, cfg));
  }
  return best < kNoiseFloor ? 0.0 : best;
}

OperationalMeasureResult operational_measure(const DensityOperator& rho, const Observable& M,
                                             const std::vector<SeparableOperation>& family,
                                             const SolverConfig& cfg) {
  if (!(rho.dims() == M.dims())) throw DimensionMismatchError("operational measure: dims differ");
  OperationalMeasureResult out;
  out.f_M = f_max(M);
  out.f12_M = f12_r(M, 1, cfg);
  const double denom = out.f_M - out.f12_M;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& op : family) {
    try {
      const double v = expectation(apply(op, rho), M);
      if (v > best) {
        best = v;
        out.best_operation = op;
      }
    } catch (const AnnihilationError&) {
      ++out.skipped;
    }
  }
  if (std::abs(denom) <= kDegenerateDenominator || !out.best_operation) return out;
  out.raw_supremum = (best - out.f12_M) / denom;
  out.value = std::clamp(out.raw_supremum, 0.0, 1.0);
  if (out.value < kNoiseFloor) out.value = 0.0;
  return out;
}

}  // namespace schmidtnum
