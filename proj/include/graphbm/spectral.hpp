// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "graphbm/graph.hpp"
#include "graphbm/wentzell.hpp"

namespace graphbm {

// Vertex-condition matrices in the edge-end basis.
//
// Per vertex v of degree d, with incident ends l_1 < ... < l_d, the d x d
// blocks are
//
//   A(v): a_v at (0,0), zero elsewhere;
//   B(v): first row  -b_{v,l_1} ... -b_{v,l_d}, zero elsewhere;
//   C(v): first row  (c_v/2, 0, ..., 0); row j >= 1 has +1 at j-1, -1 at j.
//
// Row 0 of a block states the vertex condition on (value, inward derivative,
// second derivative) at the incident ends; the remaining rows chain equality
// of the second derivative across the ends. On solutions of
// (lambda - 1/2 d^2/dx^2) u = f with data f continuous at the vertex, u''
// continuity is equivalent to continuity of u itself, so together the rows
// glue the edgewise solutions.
//
// The blocks sit block-diagonally in vertex-major order and are conjugated
// into the edge-end order (externals at 0, internals at 0, internals at rho)
// by the permutation relating the two layouts. Determinants are unchanged by
// that conjugation; the permutation's sign is recorded anyway so block-level
// cross-checks can be stated sign-exactly.
struct BoundaryMatrices {
  Eigen::MatrixXd A, B, C;  // each (|E|+2|I|) x (|E|+2|I|)
  int perm_sign = 1;        // det of the conjugating permutation
  int n_external = 0;
  std::vector<double> rho;  // internal edge lengths, edge-index order

  int dim() const { return n_external + 2 * static_cast<int>(rho.size()); }
};

BoundaryMatrices assemble_boundary_matrices(const MetricGraph& g, const WentzellData& w);

// Zhat_sign(kappa) = A - sign*kappa*B + kappa^2*C. Row 0 of a vertex block
// then reads (a_v + sign*kappa*b + kappa^2 c_v/2) across the incident ends,
// so det Zhat_sign factors per vertex into block_det_closed_form with the
// same sign. Zhat_{+1} is exactly the glue matrix of a graph without
// internal edges, where only the decaying mode e^{-kappa x} exists.
Eigen::MatrixXd secular_zhat(const BoundaryMatrices& bm, double kappa, int sign);
Eigen::MatrixXcd secular_zhat(const BoundaryMatrices& bm, std::complex<double> kappa,
                              int sign);

// Full secular matrix
//
//   Z(kappa) = (A + kappa^2 C) X+(kappa) + kappa B X-(kappa),
//
//   X+ = [[ I, 0, 0],          X- = [[-I, 0, 0],
//         [ 0, I, E],                [ 0, I,-E],
//         [ 0, E, I]],               [ 0,-E, I]],    E = diag(e^{kappa rho_i}),
//
// in (external, internal at 0, internal at rho) block order: X+ r and
// kappa X- r are the end values and inward end derivatives of the
// homogeneous ansatz u_e = r_e e^{-kappa x},
// u_i = r_i^+ e^{kappa x} + r_i^- e^{kappa(rho_i - x)}, with r ordered as
// (r_e | r_i^+ | r_i^-). With no internal edges, Z(kappa) = Zhat_{+1}(kappa).
Eigen::MatrixXd z_matrix(const BoundaryMatrices& bm, double kappa);
Eigen::MatrixXcd z_matrix(const BoundaryMatrices& bm, std::complex<double> kappa);

// Column-equilibrated variant Z(kappa) D with D = diag(I, e^{-kappa rho},
// e^{-kappa rho}). The scaled unknowns q = D^{-1} r are the coefficients of
// the decaying exponentials anchored at each internal end,
//
//   u_i = q_i^+ e^{-kappa(rho_i - x)} + q_i^- e^{-kappa x},
//
// so every matrix entry stays polynomially bounded in kappa no matter how
// large kappa*rho gets. This is the matrix the resolvent solver factors.
Eigen::MatrixXd z_matrix_equilibrated(const BoundaryMatrices& bm, double kappa);

// det(A(v) - sign*kappa*B(v) + kappa^2 C(v)) in closed form:
//   (a + sign*kappa*b_sum + kappa^2 c/2) * (-kappa^2)^(degree-1).
std::complex<double> block_det_closed_form(double a, double b_sum, double c, int degree,
                                           std::complex<double> kappa, int sign);
std::complex<double> block_det_closed_form(const MetricGraph& g, const WentzellData& w,
                                           int v, std::complex<double> kappa, int sign);

// Working cut between "invertible enough to solve" and "refuse", applied to
// the row-normalized determinant below.
inline constexpr double kSingularDetThreshold = 1e-10;

// Determinant through LU with partial pivoting, accumulated in log space so
// growth like e^{kappa rho} cannot overflow the decision. `normalized_abs`
// divides |det| by the product of Euclidean row norms (the Hadamard bound),
// giving a scale-invariant measure in [0,1]; 0 means singular.
struct DetInfo {
  std::complex<double> det{0.0, 0.0};  // raw value; may overflow on hot scans
  double log_abs = 0.0;                // log|det|, -inf when singular
  double normalized_abs = 0.0;
};

DetInfo det_info(const Eigen::MatrixXd& m);
DetInfo det_info(const Eigen::MatrixXcd& m);

// Determinant scan over a positive grid of real kappa. `radius` is the
// smallest grid point from which on the normalized |det Zhat_+-| of both
// signs stay above kSingularDetThreshold; the profile (one row per grid
// point, ascending) also carries det Z(kappa) for plotting.
struct DetScanRow {
  double kappa = 0.0;
  DetInfo plus;   // Zhat_{+1}(kappa)
  DetInfo minus;  // Zhat_{-1}(kappa)
  DetInfo z;      // Z(kappa)
};

struct InvertibilityScan {
  double radius = 0.0;
  std::vector<DetScanRow> profile;
};

// Throws ScanInconclusive when no tail of the grid stays above threshold,
// InvalidArgument on an empty or nonpositive grid.
InvertibilityScan find_invertibility_radius(const BoundaryMatrices& bm,
                                            std::vector<double> grid);

}  // namespace graphbm
