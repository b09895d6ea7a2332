// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: validate | solve | scan-det | simulate | compare.
// Exit codes are a stable contract for CI: 0 success, 2 validation/input
// error, 3 numerical failure, 4 comparison failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphbm/mc.hpp"
#include "graphbm/resolvent.hpp"
#include "graphbm/spec_doc.hpp"
#include "graphbm/spectral.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using json = nlohmann::json;
using namespace graphbm;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::SingularSecularMatrix:
    case ErrorCode::ResidualTooLarge:
    case ErrorCode::SeriesNotConverged:
    case ErrorCode::ScanInconclusive:
      return 3;
    default:
      return 2;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// All output files are written atomically (temp + rename) so a crashed run
// never leaves a truncated file behind, and re-running a command overwrites
// outputs with identical bytes.
void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + tmp.string() + "'");
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

struct Outputs {
  std::filesystem::path dir;
  std::vector<std::string> files;

  void emit(const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    atomic_write(dir / name, content);
    files.push_back((dir / name).string());
  }
};

// One appended line per run: the only place wall time appears, so all other
// outputs stay byte-identical across reruns.
void append_run_report(const Outputs& out, const std::vector<std::string>& argv_echo,
                       const json& config_echo, double wall_ms) {
  json report;
  report["argv"] = argv_echo;
  report["version"] = kVersion;
  report["config"] = config_echo;
  report["wall_ms"] = wall_ms;
  report["outputs"] = out.files;
  std::filesystem::create_directories(out.dir);
  std::ofstream log(out.dir / "run_reports.jsonl", std::ios::app);
  log << report.dump() << "\n";
}

GraphPoint parse_start(const MetricGraph& g, const std::string& s) {
  const auto bad = [&](const std::string& why) -> GraphPoint {
    throw Error(ErrorCode::InvalidArgument,
                "start '" + s + "': " + why + " (use VERTEX:<id> or EDGE:<id>:<x>)");
  };
  const auto c1 = s.find(':');
  if (c1 == std::string::npos) return bad("missing ':'");
  const std::string tag = s.substr(0, c1);
  if (tag == "VERTEX") {
    const int v = g.vertex_index(s.substr(c1 + 1));
    if (v < 0) return bad("unknown vertex");
    return GraphPoint::at_vertex(v);
  }
  if (tag == "EDGE") {
    const auto c2 = s.find(':', c1 + 1);
    if (c2 == std::string::npos) return bad("EDGE needs id and coordinate");
    const int e = g.edge_index(s.substr(c1 + 1, c2 - c1 - 1));
    if (e < 0) return bad("unknown edge");
    double x = 0.0;
    try {
      x = std::stod(s.substr(c2 + 1));
    } catch (const std::exception&) {
      return bad("bad coordinate");
    }
    return GraphPoint::on_edge(e, x);
  }
  return bad("unknown tag '" + tag + "'");
}

std::string solution_csv(const MetricGraph& g, const EdgeFunction& u) {
  std::string csv = "edge,x,u\n";
  for (int e = 0; e < g.num_edges(); ++e) {
    const EdgeGrid& gr = u.grid(e);
    for (size_t i = 0; i < gr.v.size(); ++i) {
      csv += g.edge_id(e);
      csv += ',';
      csv += fmt(gr.dx * static_cast<double>(i));
      csv += ',';
      csv += fmt(gr.v[i]);
      csv += '\n';
    }
  }
  return csv;
}

const char* kind_name(VertexKind k) {
  switch (k) {
    case VertexKind::Trap: return "trap";
    case VertexKind::HoldingKilling: return "holding-killing";
    case VertexKind::Instantaneous: return "instantaneous";
  }
  return "?";
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& spec_path, Outputs& out, json& echo) {
  const SpecDocument doc = parse_spec_document(read_file(spec_path));
  const RealizedModel m = realize_model(doc);
  json vertices = json::array();
  for (int v = 0; v < m.graph.num_vertices(); ++v) {
    const VertexClass vc = m.wentzell.classify(v);
    json row = {{"id", m.graph.vertex_id(v)}, {"kind", kind_name(vc.kind)}};
    if (vc.kind == VertexKind::HoldingKilling) row["beta"] = vc.beta;
    std::cout << m.graph.vertex_id(v) << ": " << kind_name(vc.kind);
    if (vc.kind == VertexKind::HoldingKilling) std::cout << " (beta " << vc.beta << ")";
    std::cout << "\n";
    vertices.push_back(std::move(row));
  }
  std::cout << "ok: " << m.graph.num_vertices() << " vertices, "
            << m.graph.num_edges() << " edges\n";
  echo["vertices"] = std::move(vertices);
  (void)out;
  return 0;
}

int cmd_solve(const std::string& spec_path, const std::string& fn_name,
              std::vector<double> lambdas, double h_override, Outputs& out,
              json& echo) {
  SpecDocument doc = parse_spec_document(read_file(spec_path));
  if (h_override > 0.0) {
    const auto it = doc.functions.find(fn_name);
    if (it != doc.functions.end()) it->second.h = h_override;
  }
  const RealizedModel m = realize_model(doc);
  const EdgeFunction f = realize_function(m.graph, doc, fn_name);
  const double fnorm = f.sup_norm();
  if (lambdas.empty()) throw Error(ErrorCode::InvalidArgument, "need --lambda");

  json diag_rows = json::array();
  std::vector<ResolventSolution> sols;
  sols.reserve(lambdas.size());
  for (double lambda : lambdas) {
    ResolventSolution sol = apply_resolvent(m.graph, m.wentzell, f, lambda);
    const double sup_u = sol.u.sup_norm();
    json row = {{"lambda", lambda},
                {"kappa", sol.kappa},
                {"sup_u", sup_u},
                {"contraction", fnorm > 0.0 ? lambda * sup_u / fnorm : 0.0},
                {"normalized_det", sol.diag.normalized_det},
                {"ode_residual", sol.diag.ode_residual},
                {"boundary_residual", sol.diag.boundary_residual},
                {"value_continuity", sol.diag.value_continuity},
                {"second_continuity", sol.diag.second_continuity},
                {"external_tail", sol.diag.external_tail}};
    std::cout << "lambda " << lambda << ": sup|u| " << sup_u << ", contraction "
              << (fnorm > 0.0 ? lambda * sup_u / fnorm : 0.0) << ", boundary residual "
              << sol.diag.boundary_residual << "\n";
    out.emit("solution_lambda_" + fmt_short(lambda) + ".csv",
             solution_csv(m.graph, sol.u));
    diag_rows.push_back(std::move(row));
    sols.push_back(std::move(sol));
  }

  // With two or more resolvents in hand, their pairwise consistency
  // R_l f - R_m f = (m - l) R_l R_m f is a free end-to-end check.
  json identities = json::array();
  for (size_t i = 0; i + 1 < sols.size(); ++i) {
    const double l = lambdas[i], mu = lambdas[i + 1];
    const ResolventSolution nested =
        apply_resolvent(m.graph, m.wentzell, sols[i + 1].u, l);
    const double resid = sup_abs_combination(
        {{1.0, &sols[i].u}, {-1.0, &sols[i + 1].u}, {-(mu - l), &nested.u}});
    std::cout << "identity residual (lambda " << l << ", " << mu << "): " << resid
              << "\n";
    identities.push_back({{"lambda", l}, {"mu", mu}, {"residual", resid}});
  }
  json diag = {{"function", fn_name},
               {"sup_f", fnorm},
               {"per_lambda", std::move(diag_rows)},
               {"identities", std::move(identities)}};
  out.emit("solve_diagnostics.json", diag.dump(2) + "\n");
  echo["lambdas"] = lambdas;
  echo["function"] = fn_name;
  return 0;
}

int cmd_scan_det(const std::string& spec_path, double kmin, double kmax, int steps,
                 Outputs& out, json& echo) {
  const SpecDocument doc = parse_spec_document(read_file(spec_path));
  const RealizedModel m = realize_model(doc);
  if (!(kmin > 0.0) || !(kmax > kmin) || steps < 2)
    throw Error(ErrorCode::InvalidArgument,
                "need 0 < --kappa-min < --kappa-max and --steps >= 2");
  std::vector<double> grid(static_cast<size_t>(steps));
  for (int i = 0; i < steps; ++i)
    grid[static_cast<size_t>(i)] = kmin + (kmax - kmin) * i / (steps - 1);

  const BoundaryMatrices bm = assemble_boundary_matrices(m.graph, m.wentzell);
  const InvertibilityScan scan = find_invertibility_radius(bm, grid);

  std::string csv =
      "kappa,zhat_plus_logabs,zhat_plus_norm,zhat_minus_logabs,zhat_minus_norm,"
      "z_logabs,z_norm\n";
  for (const DetScanRow& row : scan.profile) {
    csv += fmt(row.kappa);
    csv += ',';
    csv += fmt(row.plus.log_abs);
    csv += ',';
    csv += fmt(row.plus.normalized_abs);
    csv += ',';
    csv += fmt(row.minus.log_abs);
    csv += ',';
    csv += fmt(row.minus.normalized_abs);
    csv += ',';
    csv += fmt(row.z.log_abs);
    csv += ',';
    csv += fmt(row.z.normalized_abs);
    csv += '\n';
  }
  out.emit("det_scan.csv", csv);
  std::cout << "invertibility radius estimate: " << scan.radius << " (grid ["
            << kmin << ", " << kmax << "], " << steps << " points)\n";
  echo["kappa_min"] = kmin;
  echo["kappa_max"] = kmax;
  echo["steps"] = steps;
  echo["radius"] = scan.radius;
  return 0;
}

struct SimFlags {
  std::string start;
  std::string estimator = "resolvent";
  std::string function;
  std::string target;
  double lambda = 1.0;
  double t = 0.1;
  std::uint64_t seed = 1;
  int paths = 10000;
  double eps = 0.01;
  int dump_paths = 0;
};

int cmd_simulate(const std::string& spec_path, const SimFlags& fl, Outputs& out,
                 json& echo) {
  const SpecDocument doc = parse_spec_document(read_file(spec_path));
  const RealizedModel m = realize_model(doc);
  const GraphPoint start = parse_start(m.graph, fl.start);
  SimConfig cfg;
  cfg.eps = fl.eps;
  cfg.seed = fl.seed;
  cfg.n_paths = fl.paths;

  EstimatorResult est;
  double oracle = 0.0;
  bool have_oracle = false;
  double oracle_fuzz = 0.0;  // certified non-MC part of the comparison gap
  if (fl.estimator == "resolvent" || fl.estimator == "semigroup") {
    if (fl.function.empty()) throw Error(ErrorCode::InvalidArgument, "need --function");
    const EdgeFunction f = realize_function(m.graph, doc, fl.function);
    if (fl.estimator == "resolvent") {
      est = estimate_resolvent(m.graph, m.wentzell, start, f, fl.lambda, cfg);
      const ResolventSolution sol = apply_resolvent(m.graph, m.wentzell, f, fl.lambda);
      oracle = sol.u.eval(m.graph, m.graph.canonicalize(start));
      have_oracle = true;
    } else {
      est = estimate_semigroup_value(m.graph, m.wentzell, start, f, fl.t, cfg);
      const SemigroupResult sg = apply_semigroup(m.graph, m.wentzell, f, fl.t);
      oracle = sg.u.eval(m.graph, m.graph.canonicalize(start));
      oracle_fuzz = sg.tail_certificate;
      have_oracle = true;
    }
  } else if (fl.estimator == "hitting") {
    if (fl.target.empty()) throw Error(ErrorCode::InvalidArgument, "need --target");
    const int v = m.graph.vertex_index(fl.target);
    if (v < 0) throw Error(ErrorCode::InvalidArgument, "unknown vertex '" + fl.target + "'");
    est = estimate_hitting_laplace(m.graph, m.wentzell, start, v, fl.lambda, cfg);
    // Closed form whenever the start sits on an external edge hanging off the
    // target: the only way to the graph is through the target vertex.
    const GraphPoint p = m.graph.canonicalize(start);
    if (p.kind == GraphPoint::Kind::EdgePoint && !m.graph.is_internal(p.edge) &&
        m.graph.edge_from(p.edge) == v) {
      oracle = std::exp(-kappa_of(fl.lambda) * p.x);
      have_oracle = true;
    }
  } else {
    throw Error(ErrorCode::InvalidArgument,
                "unknown estimator '" + fl.estimator + "' (resolvent|hitting|semigroup)");
  }

  json report = {{"estimator", fl.estimator}, {"start", fl.start},
                 {"estimate", est.mean},      {"std_error", est.std_error},
                 {"n_paths", est.n_paths},    {"eps", est.eps},
                 {"seed", est.seed}};
  if (fl.estimator != "semigroup") report["lambda"] = fl.lambda;
  if (fl.estimator == "semigroup") report["t"] = fl.t;
  if (!fl.function.empty()) report["function"] = fl.function;
  if (!fl.target.empty()) report["target"] = fl.target;
  std::cout << fl.estimator << " estimate " << est.mean << " (std error "
            << est.std_error << ", " << est.n_paths << " paths)\n";
  if (have_oracle) {
    report["oracle"] = oracle;
    const double z = est.std_error > 0.0 ? (est.mean - oracle) / est.std_error : 0.0;
    report["z"] = z;
    if (oracle_fuzz > 0.0) report["oracle_tail_certificate"] = oracle_fuzz;
    std::cout << "oracle " << oracle << ", z " << z << "\n";
  }
  out.emit("simulate_" + fl.estimator + ".json", report.dump(2) + "\n");

  if (fl.dump_paths > 0) {
    const double horizon = fl.estimator == "semigroup"
                               ? std::max(fl.t, 1e-9)
                               : std::log(1e5) / fl.lambda;
    std::string csv = "path,time,location,x\n";
    for (int k = 0; k < fl.dump_paths; ++k) {
      Rng rng(cfg.seed, static_cast<std::uint64_t>(k) + 1);
      const PathTrajectory traj =
          simulate_path(rng, m.graph, m.wentzell, start, horizon, cfg);
      for (const PathRecord& rec : traj.records) {
        csv += std::to_string(k);
        csv += ',';
        csv += fmt(rec.time);
        csv += ',';
        if (rec.pos.kind == GraphPoint::Kind::Cemetery) {
          csv += "DELTA,0";
        } else if (rec.pos.kind == GraphPoint::Kind::Vertex) {
          csv += m.graph.vertex_id(rec.pos.vertex);
          csv += ",0";
        } else {
          csv += m.graph.edge_id(rec.pos.edge);
          csv += ',';
          csv += fmt(rec.pos.x);
        }
        csv += '\n';
      }
    }
    out.emit("trajectories.csv", csv);
  }
  echo["estimator"] = fl.estimator;
  echo["seed"] = fl.seed;
  echo["paths"] = fl.paths;
  echo["eps"] = fl.eps;
  return 0;
}

int cmd_compare(const std::string& spec_path, const SimFlags& fl, Outputs& out,
                json& echo) {
  const SpecDocument doc = parse_spec_document(read_file(spec_path));
  const RealizedModel m = realize_model(doc);
  if (fl.function.empty()) throw Error(ErrorCode::InvalidArgument, "need --function");
  const EdgeFunction f = realize_function(m.graph, doc, fl.function);
  const GraphPoint start = parse_start(m.graph, fl.start);
  const int target = fl.target.empty() ? 0 : m.graph.vertex_index(fl.target);
  if (target < 0)
    throw Error(ErrorCode::InvalidArgument, "unknown vertex '" + fl.target + "'");
  const double fnorm = f.sup_norm();
  const double budget = 0.02 * fnorm;  // documented shell-bias allowance

  SimConfig cfg;
  cfg.eps = fl.eps;
  cfg.n_paths = fl.paths;

  json checks = json::array();
  bool all_pass = true;
  const auto run_check = [&](const char* name, const auto& body) {
    try {
      json row = body();
      row["name"] = name;
      const bool pass = row["pass"].get<bool>();
      all_pass = all_pass && pass;
      std::cout << name << ": " << (pass ? "pass" : "FAIL") << "\n";
      checks.push_back(std::move(row));
    } catch (const Error& e) {
      // Surface numerical refusals (e.g. a near-singular glue matrix) in the
      // report rather than dying silently; the run still exits nonzero.
      checks.push_back({{"name", name}, {"error", e.what()}});
      json report = {{"checks", checks}};
      out.emit("compare.json", report.dump(2) + "\n");
      throw;
    }
  };

  run_check("resolvent_mc_vs_analytic", [&]() {
    // Analytic side first: a refused solve (near-singular glue matrix) must
    // surface before any paths are spent.
    const ResolventSolution sol = apply_resolvent(m.graph, m.wentzell, f, fl.lambda);
    const double oracle = sol.u.eval(m.graph, m.graph.canonicalize(start));
    cfg.seed = fl.seed;
    const EstimatorResult est =
        estimate_resolvent(m.graph, m.wentzell, start, f, fl.lambda, cfg);
    const double tol = 3.0 * est.std_error + budget;
    return json{{"mc", est.mean},     {"std_error", est.std_error},
                {"analytic", oracle}, {"tol", tol},
                {"pass", std::fabs(est.mean - oracle) <= tol}};
  });

  run_check("first_passage_decomposition", [&]() {
    const ResolventSolution sol = apply_resolvent(m.graph, m.wentzell, f, fl.lambda);
    const double rv = sol.u.vertex_value(m.graph, target);
    cfg.seed = fl.seed + 1;
    const EstimatorResult lhs =
        estimate_resolvent(m.graph, m.wentzell, start, f, fl.lambda, cfg);
    cfg.seed = fl.seed + 2;
    const EstimatorResult pre = estimate_resolvent_absorbed(
        m.graph, m.wentzell, start, f, fl.lambda, target, cfg);
    cfg.seed = fl.seed + 3;
    const EstimatorResult hit =
        estimate_hitting_laplace(m.graph, m.wentzell, start, target, fl.lambda, cfg);
    const double rhs = pre.mean + hit.mean * rv;
    const double se = std::sqrt(lhs.std_error * lhs.std_error +
                                pre.std_error * pre.std_error +
                                rv * rv * hit.std_error * hit.std_error);
    const double tol = 3.0 * se + budget;
    return json{{"lhs", lhs.mean}, {"rhs", rhs},  {"combined_se", se},
                {"tol", tol},      {"pass", std::fabs(lhs.mean - rhs) <= tol}};
  });

  run_check("semigroup_series_vs_mc", [&]() {
    const SemigroupResult sg = apply_semigroup(m.graph, m.wentzell, f, fl.t);
    const double series = sg.u.eval(m.graph, m.graph.canonicalize(start));
    cfg.seed = fl.seed + 4;
    const EstimatorResult est =
        estimate_semigroup_value(m.graph, m.wentzell, start, f, fl.t, cfg);
    const double tol = 3.0 * est.std_error + sg.tail_certificate + budget;
    return json{{"series", series},
                {"mc", est.mean},
                {"std_error", est.std_error},
                {"tail_certificate", sg.tail_certificate},
                {"tol", tol},
                {"pass", std::fabs(est.mean - series) <= tol}};
  });

  json report = {{"checks", checks}, {"all_pass", all_pass}};
  out.emit("compare.json", report.dump(2) + "\n");
  echo["function"] = fl.function;
  echo["lambda"] = fl.lambda;
  echo["t"] = fl.t;
  echo["seed"] = fl.seed;
  echo["paths"] = fl.paths;
  echo["eps"] = fl.eps;
  return all_pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brownian motion on metric graphs: analytic resolvent/semigroup "
               "solver and Monte Carlo path engine"};
  app.set_version_flag("--version", std::string("graphbm ") + kVersion);
  app.require_subcommand(1);

  std::string spec_path;
  const char* env_out = std::getenv("GRAPHBM_OUT");
  std::string out_dir = env_out ? env_out : ".";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", spec_path, "model document (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
  };

  CLI::App* validate = app.add_subcommand("validate", "check a model document");
  add_common(validate);

  CLI::App* solve = app.add_subcommand("solve", "analytic resolvent R_lambda f");
  // --h (grid pitch) would collide with the default -h short help flag.
  solve->set_help_flag("--help", "print this help message and exit");
  add_common(solve);
  std::string fn_name;
  std::vector<double> lambdas;
  double h_override = 0.0;
  solve->add_option("--function", fn_name, "named function from the document")->required();
  solve->add_option("--lambda", lambdas, "one or more lambda > 0")->required();
  solve->add_option("--h", h_override, "override the function's grid pitch");

  CLI::App* scan = app.add_subcommand("scan-det", "secular determinant scan");
  add_common(scan);
  double kmin = 0.1, kmax = 10.0;
  int steps = 200;
  scan->add_option("--kappa-min", kmin, "scan start (default 0.1)");
  scan->add_option("--kappa-max", kmax, "scan end (default 10)");
  scan->add_option("--steps", steps, "grid points (default 200)");

  SimFlags fl;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimators");
  add_common(simulate);
  simulate->add_option("--start", fl.start, "VERTEX:<id> or EDGE:<id>:<x>")->required();
  simulate->add_option("--estimator", fl.estimator, "resolvent|hitting|semigroup");
  simulate->add_option("--function", fl.function, "named function (resolvent/semigroup)");
  simulate->add_option("--target", fl.target, "target vertex id (hitting)");
  simulate->add_option("--lambda", fl.lambda, "discount rate (default 1)");
  simulate->add_option("--t", fl.t, "time horizon for semigroup (default 0.1)");
  simulate->add_option("--seed", fl.seed, "RNG seed (default 1)");
  simulate->add_option("--paths", fl.paths, "number of paths (default 10000)");
  simulate->add_option("--eps", fl.eps, "vertex shell radius (default 0.01)");
  simulate->add_option("--dump-paths", fl.dump_paths, "also write the first N trajectories");

  SimFlags cf;
  CLI::App* compare = app.add_subcommand(
      "compare", "three-way consistency: MC vs analytic resolvent, first-passage "
                 "decomposition, semigroup series vs MC");
  add_common(compare);
  compare->add_option("--start", cf.start, "VERTEX:<id> or EDGE:<id>:<x>")->required();
  compare->add_option("--function", cf.function, "named function")->required();
  compare->add_option("--target", cf.target, "decomposition vertex (default: first)");
  compare->add_option("--lambda", cf.lambda, "discount rate (default 1)");
  compare->add_option("--t", cf.t, "semigroup time (default 0.1)");
  compare->add_option("--seed", cf.seed, "RNG seed (default 1)");
  compare->add_option("--paths", cf.paths, "paths per estimate (default 10000)");
  compare->add_option("--eps", cf.eps, "vertex shell radius (default 0.01)");

  CLI11_PARSE(app, argc, argv);

  std::vector<std::string> argv_echo(argv, argv + argc);
  const auto t0 = std::chrono::steady_clock::now();
  Outputs out{out_dir, {}};
  json echo = {{"spec", spec_path}};
  int rc = 0;
  try {
    if (*validate) rc = cmd_validate(spec_path, out, echo);
    if (*solve) rc = cmd_solve(spec_path, fn_name, lambdas, h_override, out, echo);
    if (*scan) rc = cmd_scan_det(spec_path, kmin, kmax, steps, out, echo);
    if (*simulate) rc = cmd_simulate(spec_path, fl, out, echo);
    if (*compare) rc = cmd_compare(spec_path, cf, out, echo);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    rc = exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    rc = 1;
  }
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
  append_run_report(out, argv_echo, echo, wall_ms);
  return rc;
}
