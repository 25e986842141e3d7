// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

// JSON documents for states, operators, operations and reports.
//
// State and operator files:
//   {"dims": [d1, d2], "kind": "pure" | "density" | "observable", "data": ...}
// with data a list of [re, im] pairs for pure states and a row-major list of
// rows of pairs for matrices, composite index i * d2 + j.
//
// Operation files:
//   {"class": "LU" | "LI" | "LP" | "GENERAL", "pairs": [{"A": m, "B": m}, ...]}
// with m in the matrix encoding above; "dims" is optional.

#pragma once

#include <string>

#include "json.hpp"
#include "schmidtnum/hilbert.hpp"
#include "schmidtnum/locc.hpp"
#include "schmidtnum/measure_props.hpp"
#include "schmidtnum/quasiprob.hpp"
#include "schmidtnum/se_solver.hpp"
#include "schmidtnum/witness.hpp"

namespace schmidtnum::io {

using Json = nlohmann::ordered_json;

// Both throw InvalidInputError on unreadable or malformed text.
Json read_document(const std::string& path);
Json parse_document(const std::string& text);
void write_document(const std::string& path, const Json& doc);
// Two-space indentation and a trailing newline.
std::string dump(const Json& doc);

Json encode(const CVector& v);
Json encode(const CMatrix& m);
CVector decode_vector(const Json& j, Eigen::Index n, const std::string& field);
CMatrix decode_matrix(const Json& j, Eigen::Index rows, Eigen::Index cols,
                      const std::string& field);

std::string document_kind(const Json& doc);
BipartiteDims document_dims(const Json& doc);

PureState pure_from_json(const Json& doc);
// Accepts "density" and "pure" documents.
DensityOperator density_from_json(const Json& doc);
// Accepts "observable", "density" and "pure" (as its projector) documents.
Observable observable_from_json(const Json& doc);
SeparableOperation operation_from_json(const Json& doc);

Json to_json(const PureState& psi);
Json to_json(const DensityOperator& rho);
Json to_json(const Observable& l);
Json to_json(const SeparableOperation& op);

Json to_json(const SolverConfig& cfg);
Json to_json(const SolverStats& stats);
Json to_json(const SchmidtDecomposition& sd);
Json to_json(const SolveResult& res, BipartiteDims dims);
Json to_json(const WitnessCertificate& cert);
// The Gram matrix is written only up to max_gram components.
Json to_json(const QuasiProbability& qp, int max_gram = 200);
Json to_json(const SchmidtNumberEstimate& est, int max_gram = 200);
Json to_json(const EptResult& res);
Json to_json(const OperationalMeasureResult& res);
Json to_json(const PropertyReport& rep);

}  // namespace schmidtnum::io
