// Copyright 2026 The schmidtnum Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Reports go to stdout or --out as JSON documents, a
// one-line summary goes to stderr.
//
// Exit codes: 0 success, 2 input error, 3 convergence failure, 4 incomplete
// basis, 1 anything else.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "schmidtnum/errors.hpp"
#include "schmidtnum/hilbert.hpp"
#include "schmidtnum/io.hpp"
#include "schmidtnum/locc.hpp"
#include "schmidtnum/measure_props.hpp"
#include "schmidtnum/quasiprob.hpp"
#include "schmidtnum/se_solver.hpp"
#include "schmidtnum/witness.hpp"

#ifndef SCHMIDTNUM_VERSION
#define SCHMIDTNUM_VERSION "dev"
#endif

namespace sn = schmidtnum;
using sn::io::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitIncomplete = 4;

struct Outcome {
  Json report;
  int code = kExitOk;
  std::string summary;
};

sn::BipartiteDims parse_dims(const std::string& s) {
  const auto x = s.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    return sn::BipartiteDims(std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1)));
  } catch (const std::logic_error&) {
    throw sn::InvalidInputError("dims '" + s + "': expected d1xd2");
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

sn::Observable random_observable(sn::BipartiteDims dims, std::uint64_t seed) {
  sn::Rng rng = sn::make_rng(seed, {0x0b5});
  const sn::CMatrix g = sn::complex_gaussian(rng, dims.total(), dims.total());
  return sn::Observable(dims, (g + g.adjoint()) / 2.0);
}

Json generate(const std::string& kind, sn::BipartiteDims dims, std::uint64_t seed, int rank,
              int mix, double p, const std::string& op_class) {
  const int r = rank > 0 ? rank : dims.min_dim();
  const int m = mix > 0 ? mix : dims.total();
  sn::Rng rng = sn::make_rng(seed, {0x6e7});
  if (kind == "pure") return sn::io::to_json(sn::random_pure(dims, seed));
  if (kind == "product") {
    return sn::io::to_json(sn::random_pure_with_coefficients(dims, sn::RVector::Ones(1), rng));
  }
  if (kind == "schmidt") {
    return sn::io::to_json(sn::random_pure_with_coefficients(dims, sn::RVector::Ones(r), rng));
  }
  if (kind == "density") return sn::io::to_json(sn::random_density(dims, seed, m));
  if (kind == "separable") return sn::io::to_json(sn::random_separable(dims, rng, m));
  if (kind == "phi") return sn::io::to_json(sn::phi_r(r, dims));
  if (kind == "noisy-phi") {
    if (!(p >= 0.0 && p <= 1.0)) throw sn::InvalidInputError("noisy-phi: p must lie in [0, 1]");
    const sn::CMatrix id = sn::CMatrix::Identity(dims.total(), dims.total());
    return sn::io::to_json(sn::DensityOperator(
        dims, p * sn::phi_r(r, dims).projector() + (1.0 - p) * id / dims.total()));
  }
  if (kind == "phi-projector") return sn::io::to_json(sn::Observable::projector(sn::phi_r(r, dims)));
  if (kind == "identity") return sn::io::to_json(sn::Observable::identity(dims));
  if (kind == "observable") return sn::io::to_json(random_observable(dims, seed));
  if (kind == "operation") {
    return sn::io::to_json(
        sn::sample_operation(sn::parse_operation_class(op_class), dims, seed));
  }
  throw sn::InvalidInputError("gen: unknown kind '" + kind + "'");
}

sn::MeasureUnderTest named_measure(const std::string& name, const sn::SolverConfig& cfg) {
  if (name == "schmidt") return sn::schmidt_number_measure(cfg);
  if (name == "purity") return sn::purity_measure();
  if (name == "marginal") return sn::marginal_purity_deficit();
  throw sn::InvalidInputError("props: unknown measure '" + name + "'");
}

std::vector<std::string> strip_output_flags(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--out" || a == "--manifest") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--manifest=", 0) == 0) continue;
    out.push_back(a);
  }
  return out;
}

int run(const std::vector<std::string>& args);

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Schmidt-number toolkit for bipartite states", "schmidtnum"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", SCHMIDTNUM_VERSION);

  sn::SolverConfig cfg;
  int oracle = -1;
  std::string out_path;
  std::string manifest_path;
  app.add_option("--seed", cfg.seed, "Seed for every random choice");
  app.add_option("--restarts", cfg.restarts, "Random restarts per solve");
  app.add_option("--max-iter", cfg.max_iter, "Iteration cap per restart");
  app.add_option("--tol-lambda", cfg.tol_lambda, "Eigenvalue change tolerance");
  app.add_option("--tol-residual", cfg.tol_residual, "Stationarity residual tolerance");
  app.add_option("--threads", cfg.threads, "Worker threads for restarts");
  app.add_option("--oracle", oracle, "Brute-force f12 samples (0 disables)");
  app.add_option("--out", out_path, "Write the report here instead of stdout");
  app.add_option("--manifest", manifest_path, "Write a replayable run manifest here");

  std::string state_path;
  std::string observable_path;
  std::string manifest_in;
  int rank = 0;
  bool autorank = false;
  std::string op_class = "GENERAL";
  int samples = 64;
  std::string measure = "schmidt";
  int trials = 100;
  std::string dims_list = "2x2,2x3";
  std::string kind = "pure";
  std::string dims_str = "2x2";
  int mix = 0;
  double p = 0.5;

  auto* schmidt = app.add_subcommand("schmidt", "Schmidt decomposition of a pure state");
  schmidt->add_option("state", state_path)->required();

  auto* f12 = app.add_subcommand("f12", "Largest r-SE value f12_r of an observable");
  f12->add_option("observable", observable_path)->required();
  f12->add_option("--rank,-r", rank)->required();

  auto* witness = app.add_subcommand("witness", "Certify Schmidt number > r");
  witness->add_option("state", state_path)->required();
  witness->add_option("observable", observable_path)->required();
  witness->add_option("--rank,-r", rank)->required();

  auto* quasi = app.add_subcommand("quasiprob", "Quasi-probability over rank-r states");
  quasi->add_option("state", state_path)->required();
  auto* rank_opt = quasi->add_option("--rank,-r", rank);
  auto* auto_opt = quasi->add_flag("--auto", autorank, "Estimate the Schmidt number");
  rank_opt->excludes(auto_opt);

  auto* ept = app.add_subcommand("ept", "Lower bound on the partial-transpose pseudo-measure");
  ept->add_option("state", state_path)->required();

  auto* em = app.add_subcommand("em", "Operational measure E_M over a sampled family");
  em->add_option("state", state_path)->required();
  em->add_option("observable", observable_path)->required();
  em->add_option("--class", op_class);
  em->add_option("--samples", samples);

  auto* props = app.add_subcommand("props", "Measure-axiom property checks");
  props->add_option("--measure", measure)->check(CLI::IsMember({"schmidt", "purity", "marginal"}));
  props->add_option("--class", op_class);
  props->add_option("--n", trials);
  props->add_option("--dims", dims_list, "Comma-separated list such as 2x2,2x3");

  auto* gen = app.add_subcommand("gen", "Write a state, observable or operation document");
  gen->add_option("--kind", kind)
      ->check(CLI::IsMember({"pure", "product", "schmidt", "density", "separable", "phi",
                             "noisy-phi", "phi-projector", "identity", "observable",
                             "operation"}));
  gen->add_option("--dims", dims_str);
  gen->add_option("--rank,-r", rank);
  gen->add_option("--mix", mix);
  gen->add_option("--p", p);
  gen->add_option("--class", op_class);

  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay->add_option("manifest", manifest_in)->required();

  std::vector<const char*> argv{"schmidtnum"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  if (replay->parsed()) {
    const Json doc = sn::io::read_document(manifest_in);
    if (!doc.contains("argv") || !doc["argv"].is_array())
      throw sn::InvalidInputError(manifest_in + ": manifest has no 'argv' list");
    std::vector<std::string> again = doc["argv"].get<std::vector<std::string>>();
    if (!out_path.empty()) {
      again.push_back("--out");
      again.push_back(out_path);
    }
    return run(again);
  }

  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  std::vector<std::string> inputs;
  std::string command;

  if (schmidt->parsed()) {
    command = "schmidt";
    inputs = {state_path};
    const sn::PureState psi = sn::io::pure_from_json(sn::io::read_document(state_path));
    const sn::SchmidtDecomposition sd = sn::schmidt_decompose(psi);
    o.report["decomposition"] = sn::io::to_json(sd);
    o.summary = "schmidt rank " + std::to_string(sd.rank);
  } else if (f12->parsed()) {
    command = "f12";
    inputs = {observable_path};
    const sn::Observable L = sn::io::observable_from_json(sn::io::read_document(observable_path));
    sn::SolverConfig c = cfg;
    c.collect_candidates = false;
    const sn::SolveResult res = sn::solve_rse(L, rank, c);
    o.report["r"] = rank;
    o.report["f12_r"] = res.solutions.front().lambda;
    o.report["f_max"] = sn::f_max(L);
    if (oracle > 0) o.report["oracle_f12_r"] = sn::oracle_f12_r(L, rank, oracle, cfg.seed);
    o.report["solver"] = sn::io::to_json(res, L.dims());
    o.summary = "f12_" + std::to_string(rank) + " = " + fmt(res.solutions.front().lambda);
  } else if (witness->parsed()) {
    command = "witness";
    inputs = {state_path, observable_path};
    const sn::DensityOperator rho = sn::io::density_from_json(sn::io::read_document(state_path));
    const sn::Observable L = sn::io::observable_from_json(sn::io::read_document(observable_path));
    sn::WitnessOptions wo;
    if (oracle >= 0) wo.oracle_samples = oracle;
    wo.oracle_seed = cfg.seed;
    const sn::WitnessCertificate cert = sn::certify_schmidt_number(rho, L, rank, cfg, wo);
    o.report["certificate"] = sn::io::to_json(cert);
    o.summary = sn::to_string(cert.verdict) + ", margin " + fmt(cert.margin);
  } else if (quasi->parsed()) {
    command = "quasiprob";
    inputs = {state_path};
    if (!autorank && rank_opt->count() == 0)
      throw sn::InvalidInputError("quasiprob: give --rank r or --auto");
    const sn::DensityOperator rho = sn::io::density_from_json(sn::io::read_document(state_path));
    if (autorank) {
      const sn::SchmidtNumberEstimate est = sn::estimate_schmidt_number(rho, cfg);
      o.report["estimate"] = sn::io::to_json(est);
      o.summary = "schmidt number in [" + std::to_string(est.lower) + ", " +
                  std::to_string(est.upper) + "]";
      if (!est.exact() && est.failed_level > 0) o.code = kExitIncomplete;
    } else {
      const sn::QuasiProbability qp = sn::build_quasiprob(rho, rank, cfg);
      o.report["distribution"] = sn::io::to_json(qp);
      if (qp.complete) o.report["mu"] = sn::pseudomixture(qp).mu;
      o.summary = "min weight " + fmt(qp.min_weight) + ", residual " +
                  fmt(qp.reconstruction_residual);
      if (!qp.complete) o.code = kExitIncomplete;
    }
  } else if (ept->parsed()) {
    command = "ept";
    inputs = {state_path};
    const sn::DensityOperator rho = sn::io::density_from_json(sn::io::read_document(state_path));
    sn::SearchConfig sc;
    sc.seed = cfg.seed;
    const sn::EptResult res = sn::e_pt_lower_bound(rho, sc);
    o.report["ept"] = sn::io::to_json(res);
    o.summary = "E_PT >= " + fmt(res.value);
  } else if (em->parsed()) {
    command = "em";
    inputs = {state_path, observable_path};
    const sn::DensityOperator rho = sn::io::density_from_json(sn::io::read_document(state_path));
    const sn::Observable M = sn::io::observable_from_json(sn::io::read_document(observable_path));
    const auto family = sn::sample_family(sn::parse_operation_class(op_class), rho.dims(), samples,
                                          cfg.seed, true);
    const sn::OperationalMeasureResult res = sn::operational_measure(rho, M, family, cfg);
    o.report["class"] = op_class;
    o.report["family_size"] = family.size();
    o.report["em"] = sn::io::to_json(res);
    o.summary = "E_M = " + fmt(res.value);
  } else if (props->parsed()) {
    command = "props";
    std::vector<sn::BipartiteDims> dims;
    std::stringstream ss(dims_list);
    for (std::string tok; std::getline(ss, tok, ',');) dims.push_back(parse_dims(tok));
    const sn::MeasureUnderTest m = named_measure(measure, cfg);
    const sn::OperationClass tag = sn::parse_operation_class(op_class);
    const sn::StateSampler states = sn::standard_state_sampler(dims);
    const sn::OperationSampler ops = sn::class_sampler(tag);
    const sn::HarnessOptions ho{.slack = sn::kMonotonicitySlack, .threads = cfg.threads};
    const sn::PropertyReport axioms = sn::check_measure_axioms(m, states, ops, trials, cfg.seed, ho);
    const sn::PropertyReport average =
        sn::check_average_monotonicity(m, states, ops, trials, cfg.seed, ho);
    const bool pass = axioms.pass() && average.pass();
    o.report["measure"] = measure;
    o.report["class"] = op_class;
    o.report["n"] = trials;
    o.report["verdict"] = pass ? "PASS" : "FAIL";
    o.report["axioms"] = sn::io::to_json(axioms);
    o.report["average"] = sn::io::to_json(average);
    o.summary = std::string(pass ? "PASS" : "FAIL") + " (" +
                std::to_string(axioms.violations.size() + average.violations.size()) +
                " violations, " + std::to_string(axioms.skipped + average.skipped) + " skipped)";
  } else if (gen->parsed()) {
    command = "gen";
    o.report = generate(kind, parse_dims(dims_str), cfg.seed, rank, mix, p, op_class);
    o.summary = "generated " + kind;
  }

  if (command != "gen") {
    Json framed;
    framed["command"] = command;
    for (auto it = o.report.begin(); it != o.report.end(); ++it) framed[it.key()] = it.value();
    o.report = std::move(framed);
  }
  const std::string text = sn::io::dump(o.report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw sn::InvalidInputError("cannot write '" + out_path + "'");
    f << text;
  }
  std::cerr << command << ": " << o.summary << "\n";

  if (!manifest_path.empty()) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Json man;
    man["command"] = command;
    man["argv"] = strip_output_flags(args);
    man["inputs"] = inputs;
    man["solver_config"] = sn::io::to_json(cfg);
    man["seed"] = cfg.seed;
    man["version"] = SCHMIDTNUM_VERSION;
    man["exit_code"] = o.code;
    man["wall_time_seconds"] = wall;
    sn::io::write_document(manifest_path, man);
  }
  return o.code;
}

int run(const std::vector<std::string>& args) {
  try {
    return dispatch(args);
  } catch (const sn::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const sn::IncompleteBasisError& e) {
    std::cerr << "incomplete basis: " << e.what() << "\n";
    return kExitIncomplete;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  return run(std::vector<std::string>(argv + 1, argv + argc));
}
