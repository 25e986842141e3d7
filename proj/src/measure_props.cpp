// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

#include "schmidtnum/measure_props.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "li_search.hpp"
#include "parallel.hpp"
#include "schmidtnum/errors.hpp"
#include "schmidtnum/quasiprob.hpp"
#include "schmidtnum/witness.hpp"

namespace schmidtnum {

namespace {

constexpr double kPureThreshold = 1.0 - 1e-10;
constexpr double kBranchCutoff = 1e-12;
constexpr double kChainStateTolerance = 1e-12;

// Value of m or nullopt when the evaluation is skipped.
std::optional<double> try_evaluate(const MeasureUnderTest& m, const DensityOperator& rho) {
  try {
    return m.evaluate(rho);
  } catch (const MeasureSkipped&) {
  } catch (const IncompleteBasisError&) {
  } catch (const ConvergenceError&) {
  }
  return std::nullopt;
}

struct TrialOutcome {
  int checks = 0;
  int skipped = 0;
  std::vector<Violation> violations;
  double max_deficit = 0.0;

  void record(double deficit, double slack, Violation v) {
    ++checks;
    max_deficit = std::max(max_deficit, deficit);
    if (deficit > slack) {
      v.deficit = deficit;
      violations.push_back(std::move(v));
    }
  }
};

PropertyReport merge(std::string name, std::vector<TrialOutcome>& trials, double slack) {
  PropertyReport rep;
  rep.name = std::move(name);
  rep.slack = slack;
  for (auto& t : trials) {
    rep.checks_run += t.checks;
    rep.skipped += t.skipped;
    rep.max_deficit = std::max(rep.max_deficit, t.max_deficit);
    for (auto& v : t.violations) rep.violations.push_back(std::move(v));
  }
  return rep;
}

int resolved_schmidt_number(const DensityOperator& rho, const SolverConfig& cfg) {
  const BipartiteDims dims = rho.dims();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho.matrix());
  const Eigen::Index top = es.eigenvalues().size() - 1;
  if (es.eigenvalues()(top) >= kPureThreshold)
    return schmidt_rank(PureState::normalized(dims, es.eigenvectors().col(top)));

  int lower = 1;
  int upper = dims.min_dim();
  if (is_npt(rho).npt) {
    lower = 2;
  } else if (dims.total() <= 6) {
    upper = 1;
  }
  if (lower > upper) throw MeasureSkipped("schmidt measure: certificates contradict");
  if (lower == upper) return lower;

  const SchmidtNumberEstimate est = estimate_schmidt_number(rho, cfg);
  const int lo = std::max(lower, est.lower);
  const int hi = std::min(upper, est.upper);
  if (lo != hi) {
    std::ostringstream msg;
    msg << "schmidt measure: unresolved interval [" << lo << ", " << hi << "]";
    if (est.failed_level > 0) msg << ", incomplete basis at r = " << est.failed_level;
    throw MeasureSkipped(msg.str());
  }
  return lo;
}

}  // namespace

StateSampler standard_state_sampler(std::vector<BipartiteDims> dims) {
  if (dims.empty()) throw InvalidInputError("state sampler: empty dims list");
  auto pick = [dims](Rng& rng) {
    return dims[uniform_int(rng, 0, static_cast<int>(dims.size()) - 1)];
  };
  StateSampler out;
  out.general = [pick](Rng& rng) {
    const BipartiteDims d = pick(rng);
    if (uniform_int(rng, 0, 2) == 0) return DensityOperator::from_pure(random_pure(d, rng));
    return random_density(d, rng, uniform_int(rng, 1, d.total()));
  };
  out.separable = [pick](Rng& rng) {
    const BipartiteDims d = pick(rng);
    return random_separable(d, rng, uniform_int(rng, 1, 4));
  };
  return out;
}

OperationSampler class_sampler(OperationClass tag) {
  return [tag](BipartiteDims dims, Rng& rng) { return sample_operation(tag, dims, rng); };
}

MeasureUnderTest schmidt_number_measure(const SolverConfig& cfg) {
  return {"schmidt", OperationClass::kGeneral, [cfg](const DensityOperator& rho) {
            return static_cast<double>(resolved_schmidt_number(rho, cfg) - 1);
          }};
}

MeasureUnderTest purity_measure() {
  return {"purity", OperationClass::kLI,
          [](const DensityOperator& rho) { return rho.matrix().squaredNorm(); }};
}

MeasureUnderTest marginal_purity_deficit() {
  return {"marginal_purity_deficit", OperationClass::kLU, [](const DensityOperator& rho) {
            const CMatrix r1 = partial_trace(rho.matrix(), Subsystem::kSecond, rho.dims());
            return 1.0 - r1.squaredNorm();
          }};
}

PropertyReport check_measure_axioms(const MeasureUnderTest& m, const StateSampler& states,
                                    const OperationSampler& ops, int n, std::uint64_t seed,
                                    const HarnessOptions& opts) {
  std::vector<TrialOutcome> trials(std::max(n, 0));
  detail::parallel_for(n, opts.threads, [&](int t) {
    TrialOutcome& out = trials[t];
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(t)});
    if (states.separable) {
      const DensityOperator sigma = states.separable(rng);
      if (const auto e = try_evaluate(m, sigma)) {
        out.record(*e, opts.slack, {t, "separable", sigma.matrix(), sigma.dims(), std::nullopt, seed, *e, *e});
      } else {
        ++out.skipped;
      }
    }
    const DensityOperator rho = states.general(rng);
    const SeparableOperation op = ops(rho.dims(), rng);
    const auto before = try_evaluate(m, rho);
    std::optional<double> after;
    try {
      if (before) after = try_evaluate(m, apply(op, rho));
    } catch (const AnnihilationError&) {
    }
    if (!before || !after) {
      ++out.skipped;
      return;
    }
    const bool lu = op.class_tag() == OperationClass::kLU;
    const double deficit = lu ? std::abs(*after - *before) : *after - *before;
    out.record(deficit, opts.slack,
               {t, lu ? "lu_invariant" : "monotone", rho.matrix(), rho.dims(), op, seed, *before, *after});
  });
  return merge(m.name + "/axioms", trials, opts.slack);
}

PropertyReport check_average_monotonicity(const MeasureUnderTest& m, const StateSampler& states,
                                          const OperationSampler& ops, int n,
                                          std::uint64_t seed, const HarnessOptions& opts) {
  std::vector<TrialOutcome> trials(std::max(n, 0));
  detail::parallel_for(n, opts.threads, [&](int t) {
    TrialOutcome& out = trials[t];
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(t)});
    const DensityOperator rho = states.general(rng);
    const SeparableOperation op = ops(rho.dims(), rng);
    const auto before = try_evaluate(m, rho);
    if (!before) {
      ++out.skipped;
      return;
    }
    std::vector<double> probs;
    std::vector<CMatrix> branches;
    double total = 0.0;
    for (std::size_t k = 0; k < op.pairs().size(); ++k) {
      const CMatrix K = op.kraus(k);
      CMatrix b = K * rho.matrix() * K.adjoint();
      const double p = b.trace().real();
      total += p;
      probs.push_back(p);
      branches.push_back(std::move(b));
    }
    if (!(total > kAnnihilationThreshold)) {
      ++out.skipped;
      return;
    }
    double average = 0.0;
    for (std::size_t k = 0; k < branches.size(); ++k) {
      const double p = probs[k] / total;
      if (p < kBranchCutoff) continue;
      const auto e = try_evaluate(m, DensityOperator::from_unnormalized(rho.dims(), branches[k]));
      if (!e) {
        ++out.skipped;
        return;
      }
      average += p * *e;
    }
    out.record(average - *before, opts.slack,
               {t, "average", rho.matrix(), rho.dims(), op, seed, *before, average});
  });
  return merge(m.name + "/average", trials, opts.slack);
}

MeasureUnderTest conjugate_measure(const MeasureUnderTest& m, const SeparableOperation& t) {
  if (t.class_tag() != OperationClass::kLI && t.class_tag() != OperationClass::kLU)
    throw OperationClassError("conjugate_measure: needs an LU or LI operation, got " +
                              to_string(t.class_tag()));
  auto inner = m.evaluate;
  return {m.name + "'", m.declared_class,
          [inner, t](const DensityOperator& rho) { return inner(apply(t, rho)); }};
}

double e_uni(const MeasureUnderTest& m, const DensityOperator& rho, const UniSearchConfig& cfg) {
  const BipartiteDims dims = rho.dims();
  const auto objective = [&](const SeparableOperation& op) {
    try {
      if (const auto v = try_evaluate(m, apply(op, rho))) return *v;
    } catch (const AnnihilationError&) {
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  Rng rng = make_rng(cfg.seed, {0x0e0eULL});
  std::vector<detail::FilterCandidate> filters;
  const SeparableOperation id = SeparableOperation::identity(dims);
  filters.push_back({id, objective(id)});
  for (int i = 0; i < cfg.samples; ++i) {
    SeparableOperation op = sample_operation(OperationClass::kLI, dims, rng);
    const double v = objective(op);
    filters.push_back({std::move(op), v});
  }
  std::erase_if(filters, [](const auto& f) { return std::isnan(f.value); });
  if (filters.empty()) throw MeasureSkipped("e_uni: no filter could be evaluated");
  std::stable_sort(filters.begin(), filters.end(),
                   [](const auto& a, const auto& b) { return a.value > b.value; });
  double best = filters.front().value;
  const int refine = std::min<int>(cfg.refine, static_cast<int>(filters.size()));
  for (int i = 0; i < refine; ++i)
    best = std::max(best, detail::refine_filter(filters[i], objective, cfg.sweeps).value);
  return best;
}

PropertyReport check_projection_chain(int r_max, BipartiteDims dims, const SolverConfig& cfg) {
  if (r_max < 2 || r_max > dims.min_dim()) {
    throw InvalidInputError("projection chain: r_max = " + std::to_string(r_max) +
                            " outside [2, " + std::to_string(dims.min_dim()) + "]");
  }
  const MeasureUnderTest m = schmidt_number_measure(cfg);
  PropertyReport rep;
  rep.name = "projection_chain";
  const int r_end = r_max == 2 ? 1 : 2;
  DensityOperator state = DensityOperator::from_pure(phi_r(r_max, dims));
  double before = m.evaluate(state);
  rep.values.push_back(before);
  for (int r = r_max - 1; r >= r_end; --r) {
    const SeparableOperation p = truncation_projection(r, dims);
    const DensityOperator next = apply(p, state);
    const double after = m.evaluate(next);
    rep.values.push_back(after);

    const double step_deficit = std::abs((before - after) - 1.0);
    ++rep.checks_run;
    rep.max_deficit = std::max(rep.max_deficit, step_deficit);
    if (step_deficit > rep.slack)
      rep.violations.push_back({r, "chain", next.matrix(), dims, p, 0, before, after, step_deficit});

    const CMatrix target = phi_r(r, dims).projector();
    const double state_deficit = (next.matrix() - target).cwiseAbs().maxCoeff();
    ++rep.checks_run;
    if (state_deficit > kChainStateTolerance) {
      rep.max_deficit = std::max(rep.max_deficit, state_deficit);
      rep.violations.push_back({r, "chain_state", next.matrix(), dims, p, 0, before, after,
                                state_deficit});
    }
    state = next;
    before = after;
  }
  return rep;
}

}  // namespace schmidtnum
