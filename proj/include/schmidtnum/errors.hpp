// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace schmidtnum {

// Input violates a documented invariant (non-normalized state, non-Hermitian
// observable, indefinite density, malformed file). The message names the
// invariant and the size of the violation.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatchError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

// A separable operation mapped the state to (numerically) zero.
class AnnihilationError : public std::runtime_error {
 public:
  explicit AnnihilationError(double trace)
      : std::runtime_error("operation annihilated the state: tr Lambda(rho) = " +
                           std::to_string(trace)),
        trace_(trace) {}
  double trace() const noexcept { return trace_; }

 private:
  double trace_;
};

// Operation has the wrong class tag for the requested action.
class OperationClassError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IllConditionedError : public std::runtime_error {
 public:
  explicit IllConditionedError(double condition)
      : std::runtime_error("local operator is ill-conditioned: condition number " +
                           std::to_string(condition)),
        condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

// A generator / ensemble pair violates the Schmidt-rank ordering.
class RankError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// No restart of the r-SE solver reached the requested tolerances.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

// The discovered r-SE vectors do not span the state; the quasi-probability
// could not be completed.
class IncompleteBasisError : public std::runtime_error {
 public:
  IncompleteBasisError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace schmidtnum
