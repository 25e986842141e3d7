// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

#include "schmidtnum/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "schmidtnum/errors.hpp"

namespace schmidtnum::io {

namespace {

const Json& field(const Json& doc, const char* name) {
  if (!doc.is_object()) throw InvalidInputError("document: expected an object");
  const auto it = doc.find(name);
  if (it == doc.end()) throw InvalidInputError(std::string("document: missing field '") + name + "'");
  return *it;
}

Complex decode_entry(const Json& e, const std::string& where) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw InvalidInputError(where + ": expected a [re, im] pair");
  return {e[0].get<double>(), e[1].get<double>()};
}

Json number(double x) {
  return std::isfinite(x) ? Json(x) : Json(nullptr);
}

Json real_list(const RVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json dims_json(BipartiteDims dims) {
  return Json::array({dims.d1, dims.d2});
}

Json matrix_document(BipartiteDims dims, const char* kind, const CMatrix& m) {
  Json doc;
  doc["dims"] = dims_json(dims);
  doc["kind"] = kind;
  doc["data"] = encode(m);
  return doc;
}

}  // namespace

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInputError(std::string("document: ") + e.what());
  }
}

Json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_document(text.str());
  } catch (const InvalidInputError& e) {
    throw InvalidInputError(path + ": " + e.what());
  }
}

std::string dump(const Json& doc) {
  return doc.dump(2) + "\n";
}

void write_document(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write '" + path + "'");
  out << dump(doc);
}

Json encode(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

Json encode(const CMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    out.push_back(std::move(row));
  }
  return out;
}

CVector decode_vector(const Json& j, Eigen::Index n, const std::string& name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
    throw InvalidInputError(name + ": expected " + std::to_string(n) + " entries, got " +
                            (j.is_array() ? std::to_string(j.size()) : std::string("non-list")));
  }
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = decode_entry(j[i], name + "[" + std::to_string(i) + "]");
  return v;
}

CMatrix decode_matrix(const Json& j, Eigen::Index rows, Eigen::Index cols,
                      const std::string& name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw InvalidInputError(name + ": expected " + std::to_string(rows) + " rows, got " +
                            (j.is_array() ? std::to_string(j.size()) : std::string("non-list")));
  }
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    m.row(i) = decode_vector(j[i], cols, name + "[" + std::to_string(i) + "]").transpose();
  return m;
}

std::string document_kind(const Json& doc) {
  const Json& k = field(doc, "kind");
  if (!k.is_string()) throw InvalidInputError("document: 'kind' must be a string");
  return k.get<std::string>();
}

BipartiteDims document_dims(const Json& doc) {
  const Json& d = field(doc, "dims");
  if (!d.is_array() || d.size() != 2 || !d[0].is_number_integer() || !d[1].is_number_integer())
    throw InvalidInputError("document: 'dims' must be [d1, d2]");
  return BipartiteDims(d[0].get<int>(), d[1].get<int>());
}

PureState pure_from_json(const Json& doc) {
  const std::string kind = document_kind(doc);
  if (kind != "pure") throw InvalidInputError("document: expected kind 'pure', got '" + kind + "'");
  const BipartiteDims dims = document_dims(doc);
  return PureState(dims, decode_vector(field(doc, "data"), dims.total(), "data"));
}

DensityOperator density_from_json(const Json& doc) {
  const std::string kind = document_kind(doc);
  if (kind == "pure") return DensityOperator::from_pure(pure_from_json(doc));
  if (kind != "density")
    throw InvalidInputError("document: expected kind 'density' or 'pure', got '" + kind + "'");
  const BipartiteDims dims = document_dims(doc);
  return DensityOperator(dims, decode_matrix(field(doc, "data"), dims.total(), dims.total(), "data"));
}

Observable observable_from_json(const Json& doc) {
  const std::string kind = document_kind(doc);
  if (kind == "pure") return Observable::projector(pure_from_json(doc));
  if (kind != "observable" && kind != "density") {
    throw InvalidInputError("document: expected kind 'observable', 'density' or 'pure', got '" +
                            kind + "'");
  }
  const BipartiteDims dims = document_dims(doc);
  return Observable(dims, decode_matrix(field(doc, "data"), dims.total(), dims.total(), "data"));
}

SeparableOperation operation_from_json(const Json& doc) {
  const Json& c = field(doc, "class");
  if (!c.is_string()) throw InvalidInputError("operation: 'class' must be a string");
  const OperationClass tag = parse_operation_class(c.get<std::string>());
  const Json& pairs = field(doc, "pairs");
  if (!pairs.is_array() || pairs.empty())
    throw InvalidInputError("operation: 'pairs' must be a non-empty list");

  BipartiteDims dims;
  if (doc.contains("dims")) {
    dims = document_dims(doc);
  } else {
    const Json& a = field(pairs[0], "A");
    const Json& b = field(pairs[0], "B");
    if (!a.is_array() || !b.is_array()) throw InvalidInputError("operation: A and B must be matrices");
    dims = BipartiteDims(static_cast<int>(a.size()), static_cast<int>(b.size()));
  }
  std::vector<LocalOperatorPair> out;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const std::string where = "pairs[" + std::to_string(k) + "]";
    out.push_back({decode_matrix(field(pairs[k], "A"), dims.d1, dims.d1, where + ".A"),
                   decode_matrix(field(pairs[k], "B"), dims.d2, dims.d2, where + ".B")});
  }
  return SeparableOperation(dims, std::move(out), tag);
}

Json to_json(const PureState& psi) {
  Json doc;
  doc["dims"] = dims_json(psi.dims());
  doc["kind"] = "pure";
  doc["data"] = encode(psi.amplitudes());
  return doc;
}

Json to_json(const DensityOperator& rho) {
  return matrix_document(rho.dims(), "density", rho.matrix());
}

Json to_json(const Observable& l) {
  return matrix_document(l.dims(), "observable", l.matrix());
}

Json to_json(const SeparableOperation& op) {
  Json doc;
  doc["dims"] = dims_json(op.dims());
  doc["class"] = to_string(op.class_tag());
  Json pairs = Json::array();
  for (const auto& p : op.pairs()) {
    Json pj;
    pj["A"] = encode(p.A);
    pj["B"] = encode(p.B);
    pairs.push_back(std::move(pj));
  }
  doc["pairs"] = std::move(pairs);
  return doc;
}

Json to_json(const SolverConfig& cfg) {
  Json j;
  j["restarts"] = cfg.restarts;
  j["max_iter"] = cfg.max_iter;
  j["tol_lambda"] = cfg.tol_lambda;
  j["tol_residual"] = cfg.tol_residual;
  j["dedupe_overlap"] = cfg.dedupe_overlap;
  j["seed"] = cfg.seed;
  j["gram_rank_cutoff"] = cfg.gram_rank_cutoff;
  j["discovery_rounds"] = cfg.discovery_rounds;
  return j;
}

Json to_json(const SolverStats& s) {
  Json j;
  j["restarts"] = s.restarts;
  j["runs"] = s.runs;
  j["converged_runs"] = s.converged_runs;
  j["total_iterations"] = s.total_iterations;
  j["best_residual"] = number(s.best_residual);
  j["unique_solutions"] = s.unique_solutions;
  j["rediscovery"] = number(s.rediscovery);
  return j;
}

Json to_json(const SchmidtDecomposition& sd) {
  Json j;
  j["rank"] = sd.rank;
  j["coefficients"] = real_list(sd.coefficients);
  Json left = Json::array();
  Json right = Json::array();
  for (int n = 0; n < sd.rank; ++n) {
    left.push_back(encode(CVector(sd.left_basis.col(n))));
    right.push_back(encode(CVector(sd.right_basis.col(n))));
  }
  j["left_basis"] = std::move(left);
  j["right_basis"] = std::move(right);
  return j;
}

Json to_json(const SolveResult& res, BipartiteDims dims) {
  Json sols = Json::array();
  for (const auto& s : res.solutions) {
    Json j;
    j["lambda"] = s.lambda;
    j["residual"] = s.residual;
    j["iterations"] = s.iterations;
    j["rank"] = s.ansatz.r;
    j["state"] = to_json(PureState(dims, s.state));
    sols.push_back(std::move(j));
  }
  Json out;
  out["solutions"] = std::move(sols);
  out["stats"] = to_json(res.stats);
  return out;
}

Json to_json(const WitnessCertificate& c) {
  Json j;
  j["r"] = c.r;
  j["verdict"] = to_string(c.verdict);
  j["expectation"] = c.expectation_value;
  j["f12_r"] = c.f12_r_value;
  j["oracle_f12_r"] = number(c.oracle_value);
  j["margin"] = c.margin;
  j["stats"] = to_json(c.stats);
  j["observable"] = to_json(c.observable);
  return j;
}

Json to_json(const QuasiProbability& qp, int max_gram) {
  Json j;
  j["r"] = qp.r;
  j["complete"] = qp.complete;
  j["nonnegative"] = qp.nonnegative();
  j["min_weight"] = qp.min_weight;
  j["reconstruction_residual"] = qp.reconstruction_residual;
  j["nonnegative_refit"] = qp.nonnegative_refit;
  j["discovery_rounds"] = qp.discovery_rounds;
  j["stats"] = to_json(qp.stats);
  j["lambdas"] = real_list(qp.lambdas);
  Json comps = Json::array();
  for (std::size_t k = 0; k < qp.chi.size(); ++k) {
    Json c;
    c["weight"] = qp.weights(static_cast<Eigen::Index>(k));
    c["state"] = to_json(qp.chi[k]);
    comps.push_back(std::move(c));
  }
  j["components"] = std::move(comps);
  const auto n = qp.gram.rows();
  if (n <= max_gram) {
    Json g = Json::array();
    for (Eigen::Index i = 0; i < n; ++i) g.push_back(real_list(qp.gram.row(i).transpose()));
    j["gram"] = std::move(g);
  } else {
    j["gram_omitted"] = n;
  }
  return j;
}

Json to_json(const SchmidtNumberEstimate& est, int max_gram) {
  Json j;
  j["lower"] = est.lower;
  j["upper"] = est.upper;
  j["exact"] = est.exact();
  j["failed_level"] = est.failed_level;
  Json levels = Json::array();
  for (const auto& qp : est.levels) levels.push_back(to_json(qp, max_gram));
  j["levels"] = std::move(levels);
  return j;
}

Json to_json(const EptResult& res) {
  Json j;
  j["value"] = res.value;
  j["raw"] = number(res.raw);
  j["best_r"] = res.best_r;
  j["evaluated"] = res.evaluated;
  j["best_operation"] = res.best_operation ? to_json(*res.best_operation) : Json(nullptr);
  return j;
}

Json to_json(const OperationalMeasureResult& res) {
  Json j;
  j["value"] = res.value;
  j["raw_supremum"] = number(res.raw_supremum);
  j["f_M"] = res.f_M;
  j["f12_M"] = res.f12_M;
  j["skipped"] = res.skipped;
  j["best_operation"] = res.best_operation ? to_json(*res.best_operation) : Json(nullptr);
  return j;
}

Json to_json(const PropertyReport& rep) {
  Json j;
  j["name"] = rep.name;
  j["verdict"] = rep.pass() ? "PASS" : "FAIL";
  j["checks_run"] = rep.checks_run;
  j["skipped"] = rep.skipped;
  j["max_deficit"] = rep.max_deficit;
  j["slack"] = rep.slack;
  if (!rep.values.empty()) {
    Json v = Json::array();
    for (double x : rep.values) v.push_back(x);
    j["values"] = std::move(v);
  }
  Json vs = Json::array();
  for (const auto& v : rep.violations) {
    Json e;
    e["trial"] = v.trial;
    e["check"] = v.check;
    e["seed"] = v.seed;
    e["before"] = v.before;
    e["after"] = v.after;
    e["deficit"] = v.deficit;
    e["state"] = matrix_document(v.dims, "density", v.state);
    e["operation"] = v.operation ? to_json(*v.operation) : Json(nullptr);
    vs.push_back(std::move(e));
  }
  j["violations"] = std::move(vs);
  return j;
}

}  // namespace schmidtnum::io
