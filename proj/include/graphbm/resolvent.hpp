// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "graphbm/edge_function.hpp"
#include "graphbm/graph.hpp"
#include "graphbm/spectral.hpp"
#include "graphbm/wentzell.hpp"

namespace graphbm {

// Rate <-> decay parameter of the kernel e^{-kappa|x-y|}.
inline double kappa_of(double lambda) { return std::sqrt(2.0 * lambda); }

// Free-space integral u(x) = kappa^{-1} int e^{-kappa|x-y|} f~(y) dy over one
// edge, sampled on f's own grid. Exact for the piecewise-linear interpolant
// f~ at every kappa; beyond the grid it continues as u(extent) e^{-kappa d}.
// Solves lambda u - u''/2 = f~ pointwise; both the analytic solver and the
// Monte Carlo estimator's per-step expectations are built from it.
EdgeGrid free_space_integral(const EdgeGrid& f, double kappa);

struct ResolventOptions {
  // Output grids on external edges run to supp(f) + pad/kappa. e^{-21} is
  // just below the 1e-9 relative-tail contract of EdgeFunction, so solver
  // outputs are themselves valid inputs (nested applications stay licensed).
  double external_pad_over_kappa = 21.0;
  // Optional per-external-edge extent floor (indexed by edge index, which for
  // external edges starts at 0). Used to keep a common grid across a family
  // of solves, e.g. the semigroup series; empty = none.
  std::vector<double> external_extent_floor;
  bool validate_input = true;
  double singular_threshold = kSingularDetThreshold;
};

struct ResolventDiagnostics {
  double normalized_det = 0.0;     // of the equilibrated glue matrix
  double ode_residual = 0.0;       // max over interior nodes of
                                   // |lambda*u - (1/2)*D2h(u) - f|
  double boundary_residual = 0.0;  // max over vertices of
                                   // |a u(v) - sum_l b_l u'(v_l) + (c/2) u''(v)|
                                   // with one-sided finite differences
  double value_continuity = 0.0;   // max trace spread of u at a vertex
  double second_continuity = 0.0;  // same for FD second derivatives
  double external_tail = 0.0;      // max_e |u at truncation| / sup|u|
};

struct ResolventSolution {
  double lambda = 0.0;
  double kappa = 0.0;
  EdgeFunction u;           // R_lambda f on the output grids
  EdgeFunction u_particular;
  // Homogeneous coefficients in the raw mode basis (r_e | r_i^+ | r_i^-) for
  //   u_e = r_e e^{-kx},  u_i = r_i^+ e^{kx} + r_i^- e^{k(rho-x)},
  // and in the equilibrated basis (q = r rescaled by e^{kappa rho} on
  // internal edges) actually solved for:
  //   u_i = q_i^+ e^{-k(rho-x)} + q_i^- e^{-kx}.
  Eigen::VectorXd r;
  Eigen::VectorXd q;
  ResolventDiagnostics diag;
};

// Solves (lambda - 1/2 d^2/dx^2) u = f edgewise with the vertex conditions,
// as particular solution (free-line kernel against the piecewise-linear
// interpolant of f, evaluated by exact per-cell recurrences) plus the
// decaying-exponential homogeneous correction glued through the secular
// matrix. Throws SingularSecularMatrix when the normalized determinant is
// below threshold and ResidualTooLarge when the assembled solution fails its
// own residual checks.
ResolventSolution apply_resolvent(const MetricGraph& g, const WentzellData& w,
                                  const EdgeFunction& f, double lambda,
                                  const ResolventOptions& opt = {});

struct SemigroupOptions {
  double lambda_base = 0.0;  // <= 0: auto (2.5/t)
  int n_terms = 0;           // <= 0: grow until the certificate clears tail_tol
  double tail_tol = 1e-4;    // relative to ||f||
  int max_terms = 400;
  ResolventOptions resolvent;
};

struct SemigroupResult {
  EdgeFunction u;
  double lambda_base = 0.0;
  int n_terms = 0;
  double tail_certificate = 0.0;  // ||f|| * sum_{n>N} e^{n lambda t} / n!
};

// Evaluates U_t f through the alternating resolvent series
//
//   U_t^lambda f = sum_{n>=1} (-1)^{n+1} (n lambda) e^{n lambda t} R_{n lambda} f / n!,
//
// truncated once the printed tail bound clears tail_tol * ||f||. All terms
// are computed on the common grid of the n = 1 term so the alternating sum
// cancels their smoothly-varying quadrature errors. t = 0 returns f itself
// (the series limit at fixed lambda_base is off by the e^{-e^{lambda t}}
// kernel mass, which only vanishes as lambda_base grows). Throws
// SeriesNotConverged when the certificate cannot be met within max_terms.
SemigroupResult apply_semigroup(const MetricGraph& g, const WentzellData& w,
                                const EdgeFunction& f, double t,
                                const SemigroupOptions& opt = {});

// Resolvent-family health report over a lambda grid: per (function, lambda)
// the contraction ratio lambda*||R_lambda f||/||f||, the positivity defect
// max(0, -min R_lambda f)/||f|| for nonnegative f, and the strong-continuity
// proxy ||lambda R_lambda f - f||; per ordered pair (lambda, mu) the
// resolvent-identity residual ||R_lambda f - R_mu f - (mu-lambda) R_lambda R_mu f||.
// Report-only: thresholds are asserted by the test suite, not here.
struct FellerSingle {
  int f_index = 0;
  double lambda = 0.0;
  double contraction = 0.0;
  double positivity_defect = 0.0;
  double strong_continuity = 0.0;
};

struct FellerPair {
  int f_index = 0;
  double lambda = 0.0;
  double mu = 0.0;
  double identity_residual = 0.0;
};

struct FellerReport {
  std::vector<FellerSingle> singles;
  std::vector<FellerPair> pairs;
};

FellerReport check_feller_identities(const MetricGraph& g, const WentzellData& w,
                                     const std::vector<EdgeFunction>& fs,
                                     const std::vector<double>& lambdas,
                                     const ResolventOptions& opt = {});

}  // namespace graphbm
