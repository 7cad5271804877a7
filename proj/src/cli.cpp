// Copyright 2026 The qcoupling Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcoupling/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>

#include "qcoupling/coupling.hpp"
#include "qcoupling/io.hpp"
#include "qcoupling/optimizer.hpp"
#include "qcoupling/tripartite.hpp"

namespace qcoupling::cli {

using io::Json;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using qstate::DensityMatrix;
using qstate::Dims;

namespace {

struct Options {
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::size_t samples = 100;
  int max_iters = 20000;
  std::string out;
  bool fail_fast = false;
  double mu = 0.25;
  double x = 0.6;
  std::string save;
  std::vector<std::string> kraus;
  std::vector<std::string> files;
  std::string example;
};

struct Outcome {
  io::ReportFile report;
  bool violated = false;
};

using Handler = std::function<Outcome(const Options&)>;

void require_files(const Options& o, std::size_t n, const char* usage) {
  if (o.files.size() != n) {
    throw Error(ErrorKind::InvalidInput, "expected " + std::to_string(n) + " input files: " + usage);
  }
}

double density_tol(const Options& o) { return o.tol.value_or(linalg::kDefaultTol); }

DensityMatrix density(const Options& o, std::size_t i) { return io::read_density(o.files.at(i), density_tol(o)); }

std::vector<std::filesystem::path> paths(const Options& o) {
  std::vector<std::filesystem::path> p(o.files.begin(), o.files.end());
  for (const auto& k : o.kraus) p.emplace_back(k);
  return p;
}

Outcome start(const Options& o) {
  Outcome r;
  r.report.inputs_digest = io::digest_files(paths(o));
  r.report.seed = o.seed;
  return r;
}

std::string verdict(bool violated) { return violated ? "violated" : "consistent"; }

void add_criterion(Outcome& r, const tripartite::CriterionReport& c) {
  r.report.results[c.name] = io::criterion_json(c);
  r.report.slacks[c.name] = c.slack;
  r.report.verdicts[c.name] = std::string(tripartite::to_string(c.verdict));
  r.violated = r.violated || c.violated();
}

coupling::Distribution diagonal_of(const DensityMatrix& rho) {
  std::vector<double> p(rho.dim());
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    for (std::size_t j = 0; j < rho.dim(); ++j) {
      if (i != j && std::abs(rho.mat()(i, j)) > 1e-12) {
        throw Error(ErrorKind::InvalidInput, "coupling-diag needs diagonal density matrices");
      }
    }
    p[i] = rho.mat()(i, i).real();
  }
  return coupling::Distribution(std::move(p));
}

optimizer::OptimizerConfig config(const Options& o) {
  optimizer::OptimizerConfig cfg;
  cfg.max_iters = o.max_iters;
  cfg.seed = o.seed;
  if (o.tol) cfg.tol = *o.tol;
  return cfg;
}

Json optimization_json(const optimizer::OptimizationResult& res) {
  Json j{{"value", res.value},
         {"iterations", res.iterations},
         {"converged", res.converged},
         {"marginal_residual_a", res.argument.check().residual_a},
         {"marginal_residual_b", res.argument.check().residual_b}};
  if (res.certificate) j["certificate"] = {res.certificate->lower_bound, res.certificate->upper_bound};
  if (!res.warnings.empty()) j["warnings"] = res.warnings;
  return j;
}

void maybe_save(const Options& o, const DensityMatrix& rho) {
  if (!o.save.empty()) io::write_density(o.save, rho);
}

Outcome cmd_fidelity(const Options& o) {
  require_files(o, 2, "RHO SIGMA");
  Outcome r = start(o);
  r.report.results["fidelity"] = qstate::fidelity(density(o, 0), density(o, 1));
  return r;
}

Outcome cmd_tracedist(const Options& o) {
  require_files(o, 2, "RHO SIGMA");
  Outcome r = start(o);
  r.report.results["trace_distance"] = qstate::trace_distance(density(o, 0), density(o, 1));
  return r;
}

Outcome cmd_symstats(const Options& o) {
  require_files(o, 1, "RHO_AB");
  Outcome r = start(o);
  const auto s = qstate::symmetry_stats(density(o, 0));
  r.report.results["p"] = {s.p.first, s.p.second};
  r.report.results["q"] = {s.q.first, s.q.second};
  return r;
}

Outcome cmd_coupling_check(const Options& o) {
  require_files(o, 3, "JOINT RHO_A RHO_B");
  Outcome r = start(o);
  const auto c = coupling::is_coupling(density(o, 0), density(o, 1), density(o, 2), o.tol.value_or(coupling::kCouplingTol));
  r.report.results["residual_a"] = c.residual_a;
  r.report.results["residual_b"] = c.residual_b;
  r.report.verdicts["is_coupling"] = c.ok;
  r.violated = !c.ok;
  return r;
}

Outcome cmd_coupling_diag(const Options& o) {
  require_files(o, 2, "LAMBDA_A LAMBDA_B");
  Outcome r = start(o);
  const auto la = diagonal_of(density(o, 0));
  const auto lb = diagonal_of(density(o, 1));
  const auto tau = coupling::diag_coupling(la, lb);
  const double value = tau.sym_overlap();
  const double bound = coupling::diag_lower_bound(la, lb);
  r.report.results["sym_overlap"] = value;
  r.report.results["lower_bound"] = bound;
  r.report.results["marginal_residual_a"] = tau.check().residual_a;
  r.report.results["marginal_residual_b"] = tau.check().residual_b;
  r.report.slacks["lower_bound"] = value - bound;
  r.violated = value - bound < -1e-8;
  r.report.verdicts["lower_bound"] = verdict(r.violated);
  maybe_save(o, tau.joint());
  return r;
}

Outcome cmd_coupling_general(const Options& o) {
  require_files(o, 2, "RHO SIGMA");
  Outcome r = start(o);
  const auto rho = density(o, 0);
  const auto sigma = density(o, 1);
  const auto tau = coupling::general_coupling(rho, sigma);
  const double f = qstate::fidelity(rho, sigma);
  const double value = tau.sym_overlap();
  const double bound = (1.0 + f * f) / 2.0;
  r.report.results["sym_overlap"] = value;
  r.report.results["lower_bound"] = bound;
  r.report.results["marginal_residual_a"] = tau.check().residual_a;
  r.report.results["marginal_residual_b"] = tau.check().residual_b;
  r.report.slacks["lower_bound"] = value - bound;
  r.violated = value - bound < -1e-7;
  r.report.verdicts["lower_bound"] = verdict(r.violated);
  maybe_save(o, tau.joint());
  return r;
}

Outcome cmd_coupling_optimize(const Options& o) {
  require_files(o, 2, "RHO_A RHO_B");
  Outcome r = start(o);
  const auto rho_a = density(o, 0);
  const auto rho_b = density(o, 1);
  if (rho_a.dim() != rho_b.dim()) throw Error(ErrorKind::DimensionMismatch, "marginals must share a dimension");
  const auto res = optimizer::max_overlap(rho_a, rho_b, qstate::sym_projectors(rho_a.dim()).sym, config(o));
  r.report.results = optimization_json(res);
  if (res.certificate) {
    const double lo = res.value - res.certificate->lower_bound;
    const double hi = res.certificate->upper_bound - res.value;
    r.report.slacks["lower_bound"] = lo;
    r.report.slacks["upper_bound"] = hi;
    r.violated = lo < -1e-6 || hi < -1e-6;
    r.report.verdicts["certificate"] = verdict(r.violated);
  }
  maybe_save(o, res.argument.joint());
  return r;
}

Outcome cmd_emd_min(const Options& o) {
  require_files(o, 3, "RHO_A RHO_B H");
  Outcome r = start(o);
  const auto h = io::read_matrix_file(o.files[2]).matrix;
  const auto res = optimizer::emd_min(density(o, 0), density(o, 1), h, config(o));
  r.report.results = optimization_json(res);
  maybe_save(o, res.argument.joint());
  return r;
}

Json contradiction_json(const optimizer::PurePairContradiction& c) {
  return Json{{"overlap", c.overlap},           {"min_antisym", c.min_antisym},
              {"distance", c.distance},         {"f_distance", c.f_distance},
              {"distance_gap", c.distance_gap}, {"infidelity", c.infidelity},
              {"f_infidelity", c.f_infidelity}, {"infidelity_gap", c.infidelity_gap}};
}

Outcome cmd_nogo(const Options& o) {
  require_files(o, 0, "(no inputs)");
  Outcome r = start(o);
  const auto rep = optimizer::nogo_demo(config(o));
  r.report.results["twirl"] = {{"lambda_identity", rep.twirl.lambda_identity},
                               {"lambda_antisym", rep.twirl.lambda_antisym},
                               {"decomposition_residual", rep.twirl.decomposition_residual},
                               {"invariance_defect", rep.twirl.invariance_defect}};
  Json forcing = Json::array();
  for (const auto& p : rep.forcing) {
    forcing.push_back({{"mu", p.mu},
                       {"min_antisym", p.min_antisym},
                       {"distance", p.distance},
                       {"f_distance", p.f_distance},
                       {"infidelity", p.infidelity},
                       {"f_infidelity", p.f_infidelity}});
  }
  r.report.results["forcing"] = std::move(forcing);
  r.report.results["contradiction"] = contradiction_json(rep.contradiction);
  Json ends = Json::array();
  for (const auto& e : rep.endpoints) ends.push_back(contradiction_json(e));
  r.report.results["endpoints"] = std::move(ends);
  r.report.slacks["distance_gap"] = rep.contradiction.distance_gap;
  r.report.slacks["infidelity_gap"] = rep.contradiction.infidelity_gap;
  return r;
}

Outcome cmd_twirl(const Options& o) {
  require_files(o, 1, "H");
  Outcome r = start(o);
  const auto file = io::read_matrix_file(o.files[0]);
  const ComplexMatrix t = optimizer::twirl(file.matrix);
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(t.rows()))));
  const auto proj = qstate::sym_projectors(d);
  const double sym_coeff = linalg::hs_inner(proj.sym, file.matrix).real() / static_cast<double>(d * (d + 1) / 2);
  r.report.results["sym_coefficient"] = sym_coeff;
  if (d > 1) {
    r.report.results["antisym_coefficient"] =
        linalg::hs_inner(proj.antisym, file.matrix).real() / static_cast<double>(d * (d - 1) / 2);
  }
  r.report.results["twirled"] = io::to_json(io::MatrixFile{Dims{d, d}, t});
  if (!o.save.empty()) io::write_matrix_file(o.save, io::MatrixFile{Dims{d, d}, t});
  return r;
}

tripartite::MarginalTriple triple(const Options& o) {
  require_files(o, 3, "RHO_AB RHO_AC RHO_BC");
  return tripartite::MarginalTriple(density(o, 0), density(o, 1), density(o, 2));
}

Outcome cmd_tripartite_check(const Options& o) {
  const auto t = triple(o);
  Outcome r = start(o);
  const double tol = o.tol.value_or(tripartite::kCriterionTol);
  add_criterion(r, tripartite::consistency_check(t, tol));
  add_criterion(r, tripartite::fidelity_criterion_check(t, tol));
  add_criterion(r, tripartite::distance_criterion_check(t, tol));
  for (const auto& c : tripartite::entropy_criteria(t, tol)) add_criterion(r, c);
  return r;
}

Outcome cmd_tripartite_scan(const Options& o) {
  const auto t = triple(o);
  Outcome r = start(o);
  tripartite::ScanOptions opts;
  opts.samples = o.samples;
  opts.seed = o.seed;
  opts.fail_fast = o.fail_fast;
  opts.tol = o.tol.value_or(tripartite::kCriterionTol);
  for (const auto& path : o.kraus) {
    const Json j = [&] {
      std::ifstream in(path);
      if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
      try {
        return Json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidInput, path + ": malformed JSON");
      }
    }();
    if (!j.contains("kraus") || !j.at("kraus").is_array()) {
      throw Error(ErrorKind::InvalidInput, path + ": Kraus file needs a \"kraus\" array of matrix files");
    }
    std::vector<ComplexMatrix> ops;
    for (const auto& k : j.at("kraus")) ops.push_back(io::matrix_file_from_json(k).matrix);
    opts.extra_channels.emplace_back(std::move(ops));
  }
  const auto reports = tripartite::channel_scan(t, opts);
  Json list = Json::array();
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : reports) {
    list.push_back(io::criterion_json(c));
    worst = std::min(worst, c.slack);
    r.violated = r.violated || c.violated();
  }
  r.report.results["reports"] = std::move(list);
  r.report.slacks["min_slack"] = worst;
  r.report.verdicts["channel-scan"] = verdict(r.violated);
  return r;
}

Outcome cmd_symext(const Options& o) {
  require_files(o, 1, "RHO_AB");
  Outcome r = start(o);
  const auto c = tripartite::symext_2qubit(density(o, 0), o.tol.value_or(1e-10));
  add_criterion(r, c);
  r.report.verdicts["extendible"] = !c.violated();
  return r;
}

Outcome cmd_entropy(const Options& o) {
  const auto t = triple(o);
  Outcome r = start(o);
  for (const auto& c : tripartite::entropy_criteria(t, o.tol.value_or(tripartite::kCriterionTol))) add_criterion(r, c);
  return r;
}

Outcome cmd_glue(const Options& o) {
  require_files(o, 2, "TABLE_AC TABLE_AB");
  Outcome r = start(o);
  const auto glued = tripartite::classical_glue(io::read_table(o.files[0]), io::read_table(o.files[1]));
  r.report.results["joint"] = io::to_json(glued);
  if (!o.save.empty()) {
    std::ofstream f(o.save);
    f << io::to_json(glued).dump(1) << '\n';
  }
  return r;
}

Outcome cmd_example_gen(const Options& o) {
  require_files(o, 0, "(no inputs)");
  Outcome r = start(o);
  const bool uses_x = o.example == "ex6";
  const double param = uses_x ? o.x : o.mu;
  const auto states = example_states(o.example, param);
  const std::filesystem::path dir = o.out.empty() ? std::filesystem::path(".") : std::filesystem::path(o.out);
  std::filesystem::create_directories(dir);
  Json written = Json::array();
  for (const auto& [stem, rho] : states) {
    const auto path = dir / (stem + ".json");
    io::write_density(path, rho);
    written.push_back(path.string());
  }
  r.report.results["example"] = o.example;
  r.report.results[uses_x ? "x" : "mu"] = param;
  r.report.results["files"] = std::move(written);
  return r;
}

DensityMatrix pure(const ComplexVector& v, Dims dims) { return qstate::PureState(v, std::move(dims)).density(); }

}  // namespace

ExampleSet example_states(const std::string& name, double param) {
  if (name == "singlet-triple") {
    const double h = std::sqrt(0.5);
    return {{"triple_ab", pure({0.0, h, -h, 0.0}, {2, 2})},
            {"triple_ac", pure({1.0, 0.0, 0.0, 0.0}, {2, 2})},
            {"triple_bc", pure({0.0, 0.0, 0.0, 1.0}, {2, 2})}};
  }
  if (!(param >= 0.0 && param <= 1.0)) {
    throw Error(ErrorKind::ParamOutOfRange, name + " parameter must lie in [0, 1]");
  }
  if (name == "ex4" || name == "ex5") {
    const double a = std::sqrt((1.0 - param) / 2.0);
    const double b = std::sqrt(param / 2.0);
    const Complex i(0.0, 1.0);
    const ComplexVector v = name == "ex4" ? ComplexVector{a, i * b, -i * b, a} : ComplexVector{0.0, a + b, a - b, 0.0};
    const DensityMatrix joint = pure(v, {2, 2});
    return {{name + "_joint", joint}, {name + "_rho_a", joint.reduced({0})}, {name + "_rho_b", joint.reduced({1})}};
  }
  if (name == "ex6") {
    const std::vector<double> pa{(1.0 + param) / 2.0, (1.0 - param) / 2.0};
    const std::vector<double> pb{(1.0 - param) / 2.0, (1.0 + param) / 2.0};
    return {{"ex6_rho_a", DensityMatrix::diagonal(pa)}, {"ex6_rho_b", DensityMatrix::diagonal(pb)}};
  }
  throw Error(ErrorKind::ParamOutOfRange, "unknown example '" + name + "' (ex4, ex5, ex6, singlet-triple)");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum couplings, fidelity bounds and tripartite marginal criteria", "qcoupling"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--tol", o.tol, "Tolerance override");
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--samples", o.samples, "Haar samples for tripartite-scan");
  app.add_option("--max-iters", o.max_iters, "Optimizer iteration limit");
  app.add_option("--out", o.out, "Report path (output directory for example-gen)");
  app.add_flag("--fail-fast", o.fail_fast, "Stop scanning at the first violation");
  app.add_option("--mu", o.mu, "Parameter for ex4 / ex5");
  app.add_option("--x", o.x, "Parameter for ex6");
  app.add_option("--save", o.save, "Write the constructed matrix or table here");
  app.add_option("--kraus", o.kraus, "Extra Kraus channel files for tripartite-scan");

  const std::map<std::string, std::pair<std::string, Handler>> commands{
      {"fidelity", {"F(rho, sigma)", cmd_fidelity}},
      {"tracedist", {"D(rho, sigma)", cmd_tracedist}},
      {"symstats", {"Symmetric / antisymmetric weights of rho_AB", cmd_symstats}},
      {"coupling-check", {"Marginal residuals of a candidate coupling", cmd_coupling_check}},
      {"coupling-diag", {"Diagonal coupling construction", cmd_coupling_diag}},
      {"coupling-general", {"General coupling with the (1 + F^2)/2 guarantee", cmd_coupling_general}},
      {"coupling-optimize", {"max Tr(P_s tau) over couplings", cmd_coupling_optimize}},
      {"emd-min", {"min Tr(H tau) over couplings", cmd_emd_min}},
      {"nogo-demo", {"Numerical no-go demonstration", cmd_nogo}},
      {"twirl", {"Two-copy twirl of H", cmd_twirl}},
      {"tripartite-check", {"Consistency, fidelity, distance and entropy criteria", cmd_tripartite_check}},
      {"tripartite-scan", {"Channel scan of the fidelity criterion", cmd_tripartite_scan}},
      {"symext", {"Two-qubit symmetric extendibility", cmd_symext}},
      {"entropy-check", {"Entropy criteria", cmd_entropy}},
      {"classical-glue", {"Glue two classical tables over A", cmd_glue}},
      {"example-gen", {"Write example states (ex4, ex5, ex6, singlet-triple)", cmd_example_gen}},
  };
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->fallthrough();
    if (name == "example-gen") {
      sub->add_option("name", o.example, "Example name")->required();
    } else {
      sub->add_option("files", o.files, "Input files");
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitError;
  }

  std::string command;
  for (const auto& a : args) command += (command.empty() ? "" : " ") + a;
  try {
    const std::string name = app.get_subcommands().front()->get_name();
    Outcome r = commands.at(name).second(o);
    r.report.command = command;
    if (name != "example-gen" && !o.out.empty()) {
      std::ofstream f(o.out);
      if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + o.out);
      f << r.report.to_json().dump(2) << '\n';
    }
    out << r.report.to_json().dump(2) << '\n';
    return r.violated ? kExitViolation : kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace qcoupling::cli
