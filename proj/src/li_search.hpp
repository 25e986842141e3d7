// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

// Coordinate ascent over the entries of a local invertible filter, shared by
// the E_PT and E_uni searches.

#pragma once

#include <functional>

#include "schmidtnum/locc.hpp"

namespace schmidtnum::detail {

struct FilterCandidate {
  SeparableOperation op;
  double value;
};

// Perturbs the real and imaginary part of every entry of A and B in turn,
// keeping improvements; the step halves after every sweep. Objective values
// of NaN mark infeasible candidates.
FilterCandidate refine_filter(FilterCandidate start,
                              const std::function<double(const SeparableOperation&)>& objective,
                              int sweeps, double step = 0.5);

}  // namespace schmidtnum::detail
