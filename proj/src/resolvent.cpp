// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#include "graphbm/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace graphbm {

namespace {

struct CellWeights {
  double p, q;
};

// p = int_0^1 e^{-a u} u du, q = int_0^1 e^{-a u} (1-u) du: exact weights of
// the two nodes of one linear-interpolation cell against the kernel, so the
// quadrature below is exact for piecewise-linear data at any kappa.
//
// Through the phi functions: q = phi2(-a), p = phi1(-a) - q, with
// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2. phi1 is stable via
// expm1 at any argument; phi2's closed form sheds ~eps/a^2 to cancellation
// below |z| ~ 1/2, where its Taylor series reaches full precision in a dozen
// terms. (A naive closed form for p is still ~1e-10 off around a ~ 1e-3,
// which leaks straight into the resolvent.)
CellWeights cell_weights(double a) {
  const double z = -a;
  const double phi1 = a == 0.0 ? 1.0 : std::expm1(z) / z;
  double phi2;
  if (a < 0.5) {
    phi2 = 0.0;
    double term = 0.5;  // z^n / (n+2)! starting at n = 0
    for (int n = 0; std::fabs(term) > 1e-18; ++n) {
      phi2 += term;
      term *= z / static_cast<double>(n + 3);
    }
  } else {
    phi2 = (std::expm1(z) - z) / (z * z);
  }
  return {phi1 - phi2, phi2};
}

struct EdgeParticular {
  std::vector<double> up;  // u_p at the output nodes
  double at0 = 0.0;        // u_p at x = 0
  double at_far = 0.0;     // u_p at the end of f's grid
};

// u_p(x) = kappa^{-1} int e^{-kappa|x-y|} f~(y) dy over the edge, via prefix
// and suffix recurrences in O(n). Output nodes beyond f's grid (external
// padding) carry the analytically-propagated left mass.
EdgeParticular particular_on_edge(const EdgeGrid& fg, double kappa, int n_out) {
  const int nf = static_cast<int>(fg.v.size());
  const double dx = fg.dx;
  const auto [wp, wq] = cell_weights(kappa * dx);
  const double decay = std::exp(-kappa * dx);

  std::vector<double> pre(nf), post(nf);
  pre[0] = 0.0;
  for (int m = 0; m + 1 < nf; ++m)
    pre[m + 1] = decay * pre[m] + dx * (fg.v[m] * wp + fg.v[m + 1] * wq);
  post[nf - 1] = 0.0;
  for (int m = nf - 2; m >= 0; --m)
    post[m] = decay * post[m + 1] + dx * (fg.v[m] * wq + fg.v[m + 1] * wp);

  EdgeParticular out;
  out.up.resize(static_cast<size_t>(n_out));
  const double inv_k = 1.0 / kappa;
  const int shared = std::min(nf, n_out);
  for (int m = 0; m < shared; ++m) out.up[m] = inv_k * (pre[m] + post[m]);
  for (int m = nf; m < n_out; ++m)
    out.up[m] = inv_k * pre[nf - 1] * std::exp(-kappa * dx * (m - (nf - 1)));
  out.at0 = inv_k * post[0];
  out.at_far = inv_k * pre[nf - 1];
  return out;
}

// One-sided 5-point derivatives at sample u[0], oriented along increasing
// index; feed reversed samples to differentiate into the edge from its far
// end. O(d^4) resp. O(d^3).
double fd_first(const double* u, double d) {
  return (-25.0 * u[0] + 48.0 * u[1] - 36.0 * u[2] + 16.0 * u[3] - 3.0 * u[4]) /
         (12.0 * d);
}

double fd_second(const double* u, double d) {
  return (35.0 * u[0] - 104.0 * u[1] + 114.0 * u[2] - 56.0 * u[3] + 11.0 * u[4]) /
         (12.0 * d * d);
}

// Leading 5 samples of u on this edge as seen from one of its ends.
bool end_samples(const EdgeGrid& grid, bool far_end, double out[5]) {
  const size_t n = grid.v.size();
  if (n < 5) return false;
  for (int k = 0; k < 5; ++k)
    out[k] = far_end ? grid.v[n - 1 - static_cast<size_t>(k)] : grid.v[static_cast<size_t>(k)];
  return true;
}

}  // namespace

EdgeGrid free_space_integral(const EdgeGrid& f, double kappa) {
  EdgeParticular p = particular_on_edge(f, kappa, static_cast<int>(f.v.size()));
  EdgeGrid out;
  out.dx = f.dx;
  out.v = std::move(p.up);
  out.support_lo = 0.0;
  out.support_hi = out.extent();
  return out;
}

ResolventSolution apply_resolvent(const MetricGraph& g, const WentzellData& w,
                                  const EdgeFunction& f, double lambda,
                                  const ResolventOptions& opt) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::InvalidArgument, "lambda must be positive and finite");
  if (opt.validate_input)
    validate_function(g, f);
  else if (f.num_edges() != g.num_edges())
    throw Error(ErrorCode::FunctionInvalid, "function not defined on this graph");

  const double kappa = kappa_of(lambda);
  const int n_edges = g.num_edges();
  const int ne = g.num_external();
  const int ni = g.num_internal();

  // Output grids: internal edges reuse f's grid; external ones extend to
  // supp(f) + pad/kappa (or the caller's extent floor) at f's step.
  std::vector<int> n_out(n_edges);
  for (int e = 0; e < n_edges; ++e) {
    const EdgeGrid& fg = f.grid(e);
    const int nf = static_cast<int>(fg.v.size());
    if (g.is_internal(e)) {
      n_out[e] = nf;
      continue;
    }
    double want = (fg.empty_support() ? 0.0 : fg.support_hi) +
                  opt.external_pad_over_kappa / kappa;
    if (e < static_cast<int>(opt.external_extent_floor.size()))
      want = std::max(want, opt.external_extent_floor[e]);
    want = std::max(want, fg.extent());
    n_out[e] = std::max(nf, static_cast<int>(std::ceil(want / fg.dx - 1e-9)) + 1);
  }

  std::vector<EdgeParticular> part(n_edges);
  for (int e = 0; e < n_edges; ++e)
    part[e] = particular_on_edge(f.grid(e), kappa, n_out[e]);

  const BoundaryMatrices bm = assemble_boundary_matrices(g, w);
  const int dim = bm.dim();
  Eigen::VectorXd up_v(dim), f_v(dim);
  for (int e = 0; e < ne; ++e) {
    up_v(e) = part[e].at0;
    f_v(e) = f.grid(e).v.front();
  }
  for (int e = ne; e < n_edges; ++e) {
    up_v(e) = part[e].at0;
    up_v(e + ni) = part[e].at_far;
    f_v(e) = f.grid(e).v.front();
    f_v(e + ni) = f.grid(e).v.back();
  }

  // The vertex rows demand A u + B u' + C u'' = 0 for u = u_p + u_h. The
  // particular part has inward derivative kappa u_p and second derivative
  // kappa^2 u_p - 2 f at every end, so it enters as Zhat_{-1} u_p(V) - 2 C f(V);
  // the homogeneous part enters as the (equilibrated) secular matrix times q.
  const Eigen::MatrixXd zeq = z_matrix_equilibrated(bm, kappa);
  const DetInfo det = det_info(zeq);
  if (!(det.normalized_abs > opt.singular_threshold))
    throw Error(ErrorCode::SingularSecularMatrix,
                "glue matrix is numerically singular at kappa=" + std::to_string(kappa) +
                    " (normalized |det|=" + std::to_string(det.normalized_abs) +
                    "); perturb lambda or inspect a determinant scan");

  const Eigen::VectorXd rhs = 2.0 * (bm.C * f_v) - secular_zhat(bm, kappa, -1) * up_v;
  const Eigen::VectorXd q = Eigen::PartialPivLU<Eigen::MatrixXd>(zeq).solve(rhs);

  ResolventSolution sol;
  sol.lambda = lambda;
  sol.kappa = kappa;
  sol.q = q;
  sol.r = q;
  for (int e = ne; e < n_edges; ++e) {
    const double shrink = std::exp(-kappa * g.edge_length(e));
    sol.r(e) *= shrink;
    sol.r(e + ni) *= shrink;
  }

  // Assemble u = u_p + u_h on the output grids.
  std::vector<EdgeGrid> ugrids(n_edges), pgrids(n_edges);
  for (int e = 0; e < n_edges; ++e) {
    const EdgeGrid& fg = f.grid(e);
    EdgeGrid grid;
    grid.dx = fg.dx;
    grid.v = std::move(part[e].up);
    grid.support_lo = 0.0;
    grid.support_hi = grid.extent();
    pgrids[e] = grid;  // keep a copy of the particular part
    if (g.is_internal(e)) {
      const double rho = g.edge_length(e);
      const double qp = q(e), qm = q(e + ni);
      for (size_t j = 0; j < grid.v.size(); ++j) {
        const double x = grid.dx * static_cast<double>(j);
        grid.v[j] += qp * std::exp(-kappa * (rho - x)) + qm * std::exp(-kappa * x);
      }
    } else {
      const double qe = q(e);
      for (size_t j = 0; j < grid.v.size(); ++j)
        grid.v[j] += qe * std::exp(-kappa * grid.dx * static_cast<double>(j));
    }
    ugrids[e] = std::move(grid);
  }
  sol.u = EdgeFunction(std::move(ugrids));
  sol.u_particular = EdgeFunction(std::move(pgrids));

  // --- diagnostics ------------------------------------------------------
  ResolventDiagnostics& dg = sol.diag;
  dg.normalized_det = det.normalized_abs;

  const double fnorm = f.sup_norm();
  const double unorm = sol.u.sup_norm();
  const double scale = std::max(fnorm, lambda * unorm);
  const double k4 = kappa * kappa * kappa * kappa;

  for (int e = 0; e < n_edges; ++e) {
    const EdgeGrid& ug = sol.u.grid(e);
    const EdgeGrid& fg = f.grid(e);
    const size_t n = ug.v.size();
    const size_t nf = fg.v.size();
    const double dx = ug.dx;
    double resid = 0.0, fpp = 0.0;
    for (size_t j = 1; j + 1 < n; ++j) {
      const double d2 = (ug.v[j + 1] - 2.0 * ug.v[j] + ug.v[j - 1]) / (dx * dx);
      const double fj = j < nf ? fg.v[j] : 0.0;
      resid = std::max(resid, std::fabs(lambda * ug.v[j] - 0.5 * d2 - fj));
      if (j + 1 < nf)
        fpp = std::max(fpp, std::fabs(fg.v[j + 1] - 2.0 * fg.v[j] + fg.v[j - 1]) /
                                (dx * dx));
    }
    dg.ode_residual = std::max(dg.ode_residual, resid);
    const double tol = 50.0 * dx * dx * (k4 * unorm + fpp) + 1e-9 * scale;
    if (resid > tol)
      throw Error(ErrorCode::ResidualTooLarge,
                  "interior ODE residual " + std::to_string(resid) + " on edge '" +
                      g.edge_id(e) + "' exceeds " + std::to_string(tol));
  }

  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& ends = g.incident(v);
    double first_val = 0.0, first_d2 = 0.0, residual = 0.0;
    bool have_fd = true;
    for (size_t j = 0; j < ends.size(); ++j) {
      double s[5];
      if (!end_samples(sol.u.grid(ends[j].edge), ends[j].at_far_end, s)) {
        have_fd = false;
        break;
      }
      const double d = sol.u.grid(ends[j].edge).dx;
      const double val = s[0];
      const double du = fd_first(s, d);
      const double d2 = fd_second(s, d);
      if (j == 0) {
        first_val = val;
        first_d2 = d2;
        residual = w.a(v) * val + 0.5 * w.c(v) * d2;
      } else {
        dg.value_continuity = std::max(dg.value_continuity, std::fabs(val - first_val));
        dg.second_continuity = std::max(dg.second_continuity, std::fabs(d2 - first_d2));
      }
      residual -= w.b(g, v, static_cast<int>(j)) * du;
    }
    if (have_fd)
      dg.boundary_residual = std::max(dg.boundary_residual, std::fabs(residual));
  }
  if (dg.boundary_residual > 1e-3 * scale || dg.second_continuity > 1e-3 * scale)
    throw Error(ErrorCode::ResidualTooLarge,
                "vertex-condition residual " + std::to_string(dg.boundary_residual) +
                    " / second-derivative mismatch " +
                    std::to_string(dg.second_continuity) + " exceed 1e-3 of scale " +
                    std::to_string(scale));
  if (dg.value_continuity > 1e-6 * scale)
    throw Error(ErrorCode::ResidualTooLarge,
                "solution traces disagree at a vertex by " +
                    std::to_string(dg.value_continuity));

  for (int e = 0; e < ne; ++e)
    dg.external_tail =
        std::max(dg.external_tail, std::fabs(sol.u.grid(e).v.back()) /
                                       std::max(unorm, 1e-300));
  return sol;
}

namespace {

// log of sum_{n>N} z^n/n! via the first omitted term and the geometric bound
// 1/(1 - z/(N+2)); requires N+2 > z, else +inf.
double log_series_tail(double z, int n_kept) {
  const double next = n_kept + 1;
  if (next + 1.0 <= z) return std::numeric_limits<double>::infinity();
  const double first = next * std::log(z) - std::lgamma(next + 1.0);
  return first - std::log1p(-z / (next + 1.0));
}

}  // namespace

SemigroupResult apply_semigroup(const MetricGraph& g, const WentzellData& w,
                                const EdgeFunction& f, double t,
                                const SemigroupOptions& opt) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::InvalidArgument, "time must be nonnegative and finite");
  if (opt.resolvent.validate_input) validate_function(g, f);

  SemigroupResult res;
  if (t == 0.0) {  // the series itself only regains the identity as
                   // lambda_base -> infinity; U_0 = id is exact
    res.u = f;
    res.lambda_base = opt.lambda_base > 0.0 ? opt.lambda_base : 0.0;
    return res;
  }

  const double lam = opt.lambda_base > 0.0 ? opt.lambda_base : 2.5 / t;
  const double fnorm = f.sup_norm();
  const double z = std::exp(lam * t);

  int n_terms = opt.n_terms;
  if (n_terms <= 0) {
    for (int n = std::max(1, static_cast<int>(std::ceil(z))); n <= opt.max_terms; ++n) {
      if (std::exp(log_series_tail(z, n)) < opt.tail_tol) {
        n_terms = n;
        break;
      }
    }
    if (n_terms <= 0)
      throw Error(ErrorCode::SeriesNotConverged,
                  "tail certificate not met within " + std::to_string(opt.max_terms) +
                      " terms; lower lambda_base*t");
  }
  const double tail = std::exp(log_series_tail(z, n_terms));
  res.lambda_base = lam;
  res.n_terms = n_terms;
  res.tail_certificate = fnorm * tail;
  if (!(tail < opt.tail_tol))
    throw Error(ErrorCode::SeriesNotConverged,
                "tail certificate " + std::to_string(tail) + " above tolerance " +
                    std::to_string(opt.tail_tol) + "; raise n_terms or lower lambda_base*t");

  ResolventOptions ropt = opt.resolvent;
  ropt.validate_input = false;  // validated once above

  // All terms share the n=1 grids (the widest: kappa grows with n), so the
  // alternating sum cancels the smoothly-varying parts of the per-term
  // quadrature error instead of accumulating them.
  auto coefficient = [lam, t](int n) {
    const double mag = std::exp(std::log(n * lam) + n * lam * t - std::lgamma(n + 1.0));
    return (n % 2 == 1) ? mag : -mag;
  };

  ResolventSolution first = apply_resolvent(g, w, f, lam, ropt);
  ropt.external_extent_floor.assign(static_cast<size_t>(g.num_external()), 0.0);
  for (int e = 0; e < g.num_external(); ++e)
    ropt.external_extent_floor[e] = first.u.grid(e).extent();

  res.u = std::move(first.u);
  res.u.scale(coefficient(1));
  for (int n = 2; n <= n_terms; ++n) {
    const ResolventSolution sol =
        apply_resolvent(g, w, f, static_cast<double>(n) * lam, ropt);
    res.u.axpy(coefficient(n), sol.u);
  }
  return res;
}

FellerReport check_feller_identities(const MetricGraph& g, const WentzellData& w,
                                     const std::vector<EdgeFunction>& fs,
                                     const std::vector<double>& lambdas,
                                     const ResolventOptions& opt) {
  FellerReport rep;
  ResolventOptions ropt = opt;
  for (size_t fi = 0; fi < fs.size(); ++fi) {
    const EdgeFunction& f = fs[fi];
    if (opt.validate_input) validate_function(g, f);
    ropt.validate_input = false;
    const double fnorm = std::max(f.sup_norm(), 1e-300);
    const bool nonneg = f.min_value() >= -1e-15 * fnorm;

    std::vector<ResolventSolution> sols;
    sols.reserve(lambdas.size());
    for (double lambda : lambdas) sols.push_back(apply_resolvent(g, w, f, lambda, ropt));

    for (size_t i = 0; i < lambdas.size(); ++i) {
      FellerSingle s;
      s.f_index = static_cast<int>(fi);
      s.lambda = lambdas[i];
      s.contraction = lambdas[i] * sols[i].u.sup_norm() / fnorm;
      s.positivity_defect =
          nonneg ? std::max(0.0, -sols[i].u.min_value()) / fnorm : 0.0;
      s.strong_continuity =
          sup_abs_combination({{lambdas[i], &sols[i].u}, {-1.0, &f}});
      rep.singles.push_back(s);
    }
    for (size_t i = 0; i < lambdas.size(); ++i) {
      for (size_t j = 0; j < lambdas.size(); ++j) {
        FellerPair p;
        p.f_index = static_cast<int>(fi);
        p.lambda = lambdas[i];
        p.mu = lambdas[j];
        if (i == j) {
          p.identity_residual = 0.0;  // R - R - 0*R R: identically zero
        } else {
          const ResolventSolution nested =
              apply_resolvent(g, w, sols[j].u, lambdas[i], ropt);
          p.identity_residual = sup_abs_combination({{1.0, &sols[i].u},
                                                     {-1.0, &sols[j].u},
                                                     {-(p.mu - p.lambda), &nested.u}});
        }
        rep.pairs.push_back(p);
      }
    }
  }
  return rep;
}

}  // namespace graphbm
