// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

#include "schmidtnum/se_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "parallel.hpp"
#include "schmidtnum/errors.hpp"

namespace schmidtnum {

namespace {

enum class Pick { kMax, kMin, kTrack };

constexpr double kNumericalRank = 1e-10;
constexpr double kDegenerate = 1e-9;
constexpr std::size_t kMaxTruncationSeeds = 2000;

CMatrix coeff(const CVector& psi, BipartiteDims dims) {
  CMatrix p(dims.d1, dims.d2);
  for (int i = 0; i < dims.d1; ++i)
    for (int j = 0; j < dims.d2; ++j) p(i, j) = psi(dims.index(i, j));
  return p;
}

CVector vec(const CMatrix& p, BipartiteDims dims) {
  CVector v(dims.total());
  for (int i = 0; i < dims.d1; ++i)
    for (int j = 0; j < dims.d2; ++j) v(dims.index(i, j)) = p(i, j);
  return v;
}

// Column k * d1 + i is e_i (x) y_k.
CMatrix embed_x(const CMatrix& yb, int d1) {
  const int d2 = static_cast<int>(yb.rows());
  const int k = static_cast<int>(yb.cols());
  CMatrix m = CMatrix::Zero(d1 * d2, k * d1);
  for (int kk = 0; kk < k; ++kk)
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d2; ++j) m(i * d2 + j, kk * d1 + i) = yb(j, kk);
  return m;
}

// Column k * d2 + j is x_k (x) e_j.
CMatrix embed_y(const CMatrix& xb, int d2) {
  const int d1 = static_cast<int>(xb.rows());
  const int k = static_cast<int>(xb.cols());
  CMatrix m = CMatrix::Zero(d1 * d2, k * d2);
  for (int kk = 0; kk < k; ++kk)
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d2; ++j) m(i * d2 + j, kk * d2 + j) = xb(i, kk);
  return m;
}

// Orthonormal basis of the column span of v, padded with random orthogonal
// directions up to min(r, rows).
CMatrix orth_span(const CMatrix& v, int r, Rng& rng) {
  const int d = static_cast<int>(v.rows());
  const int target = std::min(r, d);
  Eigen::JacobiSVD<CMatrix> svd(v, Eigen::ComputeThinU);
  const RVector& s = svd.singularValues();
  int k = 0;
  if (s.size() > 0 && s(0) > 0.0)
    while (k < s.size() && k < target && s(k) > kNumericalRank * s(0)) ++k;
  CMatrix q(d, target);
  q.leftCols(k) = svd.matrixU().leftCols(k);
  while (k < target) {
    CVector z = complex_gaussian(rng, d);
    for (int pass = 0; pass < 2; ++pass) z -= q.leftCols(k) * (q.leftCols(k).adjoint() * z);
    const double n = z.norm();
    if (n > 1e-6) q.col(k++) = z / n;
  }
  return q;
}

struct Eig {
  RVector w;
  CMatrix v;
};

// Eigenvectors inside numerically degenerate clusters are mixed by a random
// unitary so that restarts explore the whole eigenspace.
Eig eig_randomized(const CMatrix& a, Rng& rng) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (a + a.adjoint()));
  Eig out{es.eigenvalues(), es.eigenvectors()};
  const Eigen::Index n = out.w.size();
  Eigen::Index i = 0;
  while (i < n) {
    Eigen::Index j = i + 1;
    while (j < n && std::abs(out.w(j) - out.w(i)) < kDegenerate * std::max(1.0, std::abs(out.w(i))))
      ++j;
    if (j - i > 1) out.v.middleCols(i, j - i) = out.v.middleCols(i, j - i) * haar_unitary(rng, j - i);
    i = j;
  }
  return out;
}

struct HalfStep {
  double lambda;
  CVector psi;
  Eig eig;
  CMatrix m;
};

HalfStep half_step(const CMatrix& L, CMatrix m, Pick pick, const CVector& cur, Rng& rng) {
  Eig e = eig_randomized(m.adjoint() * L * m, rng);
  Eigen::Index j = 0;
  switch (pick) {
    case Pick::kMax: j = e.w.size() - 1; break;
    case Pick::kMin: j = 0; break;
    case Pick::kTrack: (e.v.adjoint() * (m.adjoint() * cur)).cwiseAbs().maxCoeff(&j); break;
  }
  CVector psi = m * e.v.col(j);
  psi.normalize();
  const double lambda = e.w(j);
  return {lambda, std::move(psi), std::move(e), std::move(m)};
}

double residual_impl(const CMatrix& L, BipartiteDims dims, const CVector& psi, double lambda,
                     double cutoff) {
  Eigen::JacobiSVD<CMatrix> svd(coeff(psi, dims), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  Eigen::Index k = 0;
  while (k < s.size() && s(k) * s(k) > cutoff) ++k;
  k = std::max<Eigen::Index>(k, 1);
  const CMatrix g = coeff(L * psi - lambda * psi, dims);
  // (I (x) f_n)^dagger g = G conj(f_n) = G v_n and (e_n (x) I)^dagger g = G^T conj(e_n).
  const double ry = (g * svd.matrixV().leftCols(k)).norm();
  const double rx = (g.transpose() * svd.matrixU().leftCols(k).conjugate()).norm();
  return std::max(rx, ry);
}

struct Canonical {
  CVector psi;
  double lambda = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  RVector s;
  CMatrix e;
  CMatrix f;
};

// Drops Schmidt components with squared coefficient <= cutoff, renormalizes
// and evaluates lambda and the residual at the truncated state.
Canonical canonicalize(const CMatrix& L, BipartiteDims dims, const CVector& psi, double cutoff) {
  Eigen::JacobiSVD<CMatrix> svd(coeff(psi, dims), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  Eigen::Index k = 0;
  while (k < s.size() && s(k) * s(k) > cutoff) ++k;
  k = std::max<Eigen::Index>(k, 1);
  Canonical c;
  c.s = s.head(k) / s.head(k).norm();
  c.e = svd.matrixU().leftCols(k);
  c.f = svd.matrixV().leftCols(k).conjugate();
  c.psi = vec(c.e * c.s.cast<Complex>().asDiagonal() * c.f.transpose(), dims);
  c.lambda = c.psi.dot(L * c.psi).real();
  c.residual = residual_impl(L, dims, c.psi, c.lambda, cutoff);
  return c;
}

struct RunResult {
  Canonical sol;
  bool converged = false;
  int iterations = 0;
  HalfStep last;
};

RunResult run(const CMatrix& L, BipartiteDims dims, int r, CVector psi, Pick pick, Rng& rng,
              const SolverConfig& cfg, std::vector<double>* trace) {
  RunResult out;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const CMatrix yb = orth_span(coeff(psi, dims).transpose(), r, rng);
    HalfStep h = half_step(L, embed_x(yb, dims.d1), pick, psi, rng);
    if (trace) trace->push_back(h.lambda);
    const CMatrix xb = orth_span(coeff(h.psi, dims), r, rng);
    h = half_step(L, embed_y(xb, dims.d2), pick, h.psi, rng);
    if (trace) trace->push_back(h.lambda);
    psi = h.psi;
    out.iterations = it;
    const bool settled = std::abs(h.lambda - prev) < cfg.tol_lambda;
    prev = h.lambda;
    out.last = std::move(h);
    if (settled) {
      out.sol = canonicalize(L, dims, psi, cfg.gram_rank_cutoff);
      if (out.sol.residual <= cfg.tol_residual) {
        out.converged = true;
        return out;
      }
    }
  }
  out.sol = canonicalize(L, dims, psi, cfg.gram_rank_cutoff);
  return out;
}

CVector random_ansatz(BipartiteDims dims, int r, Rng& rng) {
  const CMatrix x = complex_gaussian(rng, dims.d1, r);
  const CMatrix y = complex_gaussian(rng, dims.d2, r);
  return vec(x * y.transpose(), dims).normalized();
}

RSESolution to_solution(const Canonical& c, int iterations) {
  RSESolution s;
  s.lambda = c.lambda;
  s.residual = c.residual;
  s.iterations = iterations;
  s.state = c.psi;
  const int k = static_cast<int>(c.s.size());
  s.ansatz.r = k;
  for (int n = 0; n < k; ++n) {
    s.ansatz.x_vectors.push_back(c.s(n) * c.e.col(n));
    s.ansatz.y_vectors.push_back(c.f.col(n));
  }
  s.gram_x = (c.s.array().square()).matrix().cast<Complex>().asDiagonal();
  s.gram_y = CMatrix::Identity(k, k);
  return s;
}

struct Batch {
  std::vector<RSESolution> found;
  int runs = 0;
  int converged = 0;
  long iterations = 0;
  double best_residual = std::numeric_limits<double>::infinity();

  void record(const RunResult& rr) {
    ++runs;
    iterations += rr.iterations;
    best_residual = std::min(best_residual, rr.sol.residual);
    if (rr.converged) {
      ++converged;
      found.push_back(to_solution(rr.sol, rr.iterations));
    }
  }
};

Batch run_restart(const CMatrix& L, BipartiteDims dims, int r, const SolverConfig& cfg, int idx) {
  Rng rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(idx)});
  Batch b;
  const CVector start = random_ansatz(dims, r, rng);
  RunResult top = run(L, dims, r, start, Pick::kMax, rng, cfg, nullptr);
  b.record(top);
  if (!cfg.collect_candidates) return b;
  b.record(run(L, dims, r, start, Pick::kMin, rng, cfg, nullptr));
  const HalfStep& h = top.last;
  for (Eigen::Index j = 0; j < h.eig.w.size(); ++j) {
    CVector seed = h.m * h.eig.v.col(j);
    b.record(run(L, dims, r, seed.normalized(), Pick::kTrack, rng, cfg, nullptr));
  }
  return b;
}

void for_each_subset(int m, int k, const std::function<bool(const std::vector<int>&)>& f) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    if (!f(idx)) return;
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Track runs seeded by Schmidt truncations of the eigenvectors of L. They
// reach saddle points that random starts rarely approach.
Batch run_truncation_seeds(const CMatrix& L, BipartiteDims dims, int r, const SolverConfig& cfg) {
  Rng rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(r), 0x7eedULL << 32});
  Batch b;
  const Eig e = eig_randomized(L, rng);
  std::size_t count = 0;
  for (Eigen::Index n = 0; n < e.w.size(); ++n) {
    Eigen::JacobiSVD<CMatrix> svd(coeff(e.v.col(n), dims),
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& s = svd.singularValues();
    int m = 0;
    while (m < s.size() && s(m) > kNumericalRank) ++m;
    const int k = std::min(r, m);
    if (k == 0) continue;
    for_each_subset(m, k, [&](const std::vector<int>& sub) {
      CMatrix p = CMatrix::Zero(dims.d1, dims.d2);
      for (int i : sub)
        p += s(i) * svd.matrixU().col(i) * svd.matrixV().col(i).adjoint();
      b.record(run(L, dims, r, vec(p, dims).normalized(), Pick::kTrack, rng, cfg, nullptr));
      return ++count < kMaxTruncationSeeds;
    });
    if (count >= kMaxTruncationSeeds) break;
  }
  return b;
}

bool solution_before(const RSESolution& a, const RSESolution& b) {
  if (a.lambda != b.lambda) return a.lambda > b.lambda;
  const CVector pa = phase_aligned(a.state);
  const CVector pb = phase_aligned(b.state);
  for (Eigen::Index i = 0; i < pa.size(); ++i) {
    if (pa(i).real() != pb(i).real()) return pa(i).real() < pb(i).real();
    if (pa(i).imag() != pb(i).imag()) return pa(i).imag() < pb(i).imag();
  }
  return false;
}

SolveResult merge(std::vector<Batch>& batches, const SolverConfig& cfg, int restarts) {
  SolveResult out;
  out.stats.restarts = restarts;
  out.stats.best_residual = std::numeric_limits<double>::infinity();
  std::vector<RSESolution> all;
  for (auto& b : batches) {
    out.stats.runs += b.runs;
    out.stats.converged_runs += b.converged;
    out.stats.total_iterations += b.iterations;
    out.stats.best_residual = std::min(out.stats.best_residual, b.best_residual);
    for (auto& s : b.found) all.push_back(std::move(s));
  }
  if (out.stats.converged_runs == 0) {
    std::ostringstream msg;
    msg << "r-SE solver: none of " << out.stats.runs << " runs converged within "
        << cfg.max_iter << " iterations; best residual " << out.stats.best_residual;
    throw ConvergenceError(msg.str(), out.stats.best_residual);
  }
  std::sort(all.begin(), all.end(), solution_before);
  for (auto& s : all) {
    bool dup = false;
    for (const auto& k : out.solutions) {
      if (fidelity(k.state, s.state) >= cfg.dedupe_overlap) {
        dup = true;
        break;
      }
    }
    if (!dup) out.solutions.push_back(std::move(s));
  }
  out.stats.unique_solutions = static_cast<int>(out.solutions.size());
  out.stats.rediscovery =
      1.0 - static_cast<double>(out.stats.unique_solutions) / out.stats.converged_runs;
  return out;
}

void check_rank(const Observable& L, int r) {
  if (r < 1 || r > L.dims().min_dim()) {
    throw InvalidInputError("r-SE solver: r = " + std::to_string(r) + " outside [1, " +
                            std::to_string(L.dims().min_dim()) + "]");
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (restarts < 1) throw InvalidInputError("solver config: restarts must be >= 1");
  if (max_iter < 1) throw InvalidInputError("solver config: max_iter must be >= 1");
  if (!(tol_lambda > 0.0) || !(tol_residual > 0.0) || !(gram_rank_cutoff > 0.0))
    throw InvalidInputError("solver config: tolerances must be > 0");
  if (!(dedupe_overlap > 0.0) || dedupe_overlap > 1.0)
    throw InvalidInputError("solver config: dedupe_overlap must lie in (0, 1]");
  if (threads < 1) throw InvalidInputError("solver config: threads must be >= 1");
  if (discovery_rounds < 1)
    throw InvalidInputError("solver config: discovery_rounds must be >= 1");
}

CVector RankRAnsatz::assemble() const {
  if (x_vectors.empty() || x_vectors.size() != y_vectors.size())
    throw InvalidInputError("rank-r ansatz: need matching nonempty x and y lists");
  CVector out = CVector::Zero(x_vectors.front().size() * y_vectors.front().size());
  for (std::size_t k = 0; k < x_vectors.size(); ++k) out += kron(x_vectors[k], y_vectors[k]);
  return out;
}

BlockSystem assemble_blocks(const Observable& L, const std::vector<CVector>& side_vectors,
                            Subsystem side) {
  const BipartiteDims dims = L.dims();
  const int d_side = side == Subsystem::kSecond ? dims.d2 : dims.d1;
  if (side_vectors.empty()) throw InvalidInputError("assemble_blocks: no vectors");
  const int r = static_cast<int>(side_vectors.size());
  CMatrix v(d_side, r);
  for (int k = 0; k < r; ++k) {
    if (side_vectors[k].size() != d_side)
      throw DimensionMismatchError("assemble_blocks: vector length does not match subsystem");
    if (side_vectors[k].norm() == 0.0) throw InvalidInputError("assemble_blocks: zero vector");
    v.col(k) = side_vectors[k];
  }
  const CMatrix e = side == Subsystem::kSecond ? embed_x(v, dims.d1) : embed_y(v, dims.d2);
  return {e.adjoint() * L.matrix() * e, v.adjoint() * v};
}

double rse_residual(const Observable& L, const CVector& psi, double lambda, double cutoff) {
  if (psi.size() != L.dims().total()) throw DimensionMismatchError("rse_residual: size mismatch");
  return residual_impl(L.matrix(), L.dims(), psi, lambda, cutoff);
}

SolveResult solve_rse(const Observable& L, int r, const SolverConfig& cfg) {
  cfg.validate();
  check_rank(L, r);
  const CMatrix& lm = L.matrix();
  const BipartiteDims dims = L.dims();
  std::vector<Batch> batches(cfg.restarts + (cfg.collect_candidates ? 1 : 0));
  detail::parallel_for(cfg.restarts, cfg.threads,
               [&](int i) { batches[i] = run_restart(lm, dims, r, cfg, i); });
  if (cfg.collect_candidates) batches.back() = run_truncation_seeds(lm, dims, r, cfg);
  return merge(batches, cfg, cfg.restarts);
}

double f12_r(const Observable& L, int r, const SolverConfig& cfg) {
  SolverConfig c = cfg;
  c.collect_candidates = false;
  return solve_rse(L, r, c).solutions.front().lambda;
}

double f_max(const Observable& L) {
  return max_eigenvalue(L.matrix());
}

std::vector<double> ascent_trace(const Observable& L, int r, const SolverConfig& cfg,
                                 int restart) {
  cfg.validate();
  check_rank(L, r);
  Rng rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(restart)});
  const CVector start = random_ansatz(L.dims(), r, rng);
  std::vector<double> trace;
  run(L.matrix(), L.dims(), r, start, Pick::kMax, rng, cfg, &trace);
  return trace;
}

SolveResult se_solve_r1(const Observable& L, const SolverConfig& cfg) {
  cfg.validate();
  const BipartiteDims dims = L.dims();
  const CMatrix& lm = L.matrix();
  // L_b(i, k) = sum_{j,l} conj(b_j) L(ij, kl) b_l and the mirrored L_a.
  auto reduce_b = [&](const CVector& b) {
    CMatrix out = CMatrix::Zero(dims.d1, dims.d1);
    for (int i = 0; i < dims.d1; ++i)
      for (int k = 0; k < dims.d1; ++k)
        out(i, k) = b.dot(lm.block(i * dims.d2, k * dims.d2, dims.d2, dims.d2) * b);
    return out;
  };
  auto reduce_a = [&](const CVector& a) {
    CMatrix out = CMatrix::Zero(dims.d2, dims.d2);
    for (int i = 0; i < dims.d1; ++i)
      for (int k = 0; k < dims.d1; ++k)
        out += std::conj(a(i)) * a(k) * lm.block(i * dims.d2, k * dims.d2, dims.d2, dims.d2);
    return out;
  };
  auto top = [](const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()));
    const Eigen::Index n = es.eigenvalues().size() - 1;
    return std::pair<double, CVector>(es.eigenvalues()(n), es.eigenvectors().col(n));
  };

  std::vector<Batch> batches(cfg.restarts);
  detail::parallel_for(cfg.restarts, cfg.threads, [&](int idx) {
    Rng rng = make_rng(cfg.seed, {0x5e1ULL, static_cast<std::uint64_t>(idx)});
    CVector a = complex_gaussian(rng, dims.d1).normalized();
    CVector b = complex_gaussian(rng, dims.d2).normalized();
    double prev = std::numeric_limits<double>::quiet_NaN();
    RunResult rr;
    for (int it = 1; it <= cfg.max_iter; ++it) {
      a = top(reduce_b(b)).second;
      const auto [g, bn] = top(reduce_a(a));
      b = bn;
      rr.iterations = it;
      const CVector psi = kron(a, b);
      const double lambda = psi.dot(lm * psi).real();
      const double res = std::max((reduce_b(b) * a - lambda * a).norm(),
                                  (reduce_a(a) * b - lambda * b).norm());
      rr.sol.psi = psi;
      rr.sol.lambda = lambda;
      rr.sol.residual = res;
      const bool settled = std::abs(g - prev) < cfg.tol_lambda;
      prev = g;
      if (settled && res <= cfg.tol_residual) {
        rr.converged = true;
        break;
      }
    }
    Batch& out = batches[idx];
    ++out.runs;
    out.iterations += rr.iterations;
    out.best_residual = rr.sol.residual;
    if (rr.converged) {
      ++out.converged;
      RSESolution s;
      s.lambda = rr.sol.lambda;
      s.residual = rr.sol.residual;
      s.iterations = rr.iterations;
      s.state = rr.sol.psi;
      s.ansatz.r = 1;
      s.ansatz.x_vectors = {a};
      s.ansatz.y_vectors = {b};
      s.gram_x = CMatrix::Identity(1, 1);
      s.gram_y = CMatrix::Identity(1, 1);
      out.found.push_back(std::move(s));
    }
  });
  return merge(batches, cfg, cfg.restarts);
}

}  // namespace schmidtnum
