// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

#include "li_search.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "schmidtnum/errors.hpp"

namespace schmidtnum::detail {

namespace {

double evaluate(const std::function<double(const SeparableOperation&)>& objective,
                const BipartiteDims& dims, const CMatrix& a, const CMatrix& b,
                std::optional<SeparableOperation>& out) {
  try {
    SeparableOperation op(dims, {{a, b}}, OperationClass::kLI);
    const double v = objective(op);
    if (std::isnan(v)) return v;
    out.emplace(std::move(op));
    return v;
  } catch (const OperationClassError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

FilterCandidate refine_filter(FilterCandidate best,
                              const std::function<double(const SeparableOperation&)>& objective,
                              int sweeps, double step) {
  const BipartiteDims dims = best.op.dims();
  for (int sweep = 0; sweep < sweeps; ++sweep, step *= 0.5) {
    for (int side = 0; side < 2; ++side) {
      const int d = side == 0 ? dims.d1 : dims.d2;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          for (const Complex dir : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
            for (const double sign : {1.0, -1.0}) {
              CMatrix a = best.op.pairs().front().A;
              CMatrix b = best.op.pairs().front().B;
              CMatrix& m = side == 0 ? a : b;
              m(i, j) += sign * step * dir * std::max(1.0, m.cwiseAbs().maxCoeff());
              std::optional<SeparableOperation> op;
              const double v = evaluate(objective, dims, a, b, op);
              if (!std::isnan(v) && v > best.value) {
                best = {std::move(*op), v};
                break;
              }
            }
          }
        }
      }
    }
  }
  return best;
}

}  // namespace schmidtnum::detail
