// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#include "graphbm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace graphbm {

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

void check_sign(int sign) {
  if (sign != 1 && sign != -1)
    throw Error(ErrorCode::InvalidArgument, "sign must be +1 or -1");
}

template <typename Scalar>
Mat<Scalar> zhat_impl(const BoundaryMatrices& bm, Scalar kappa, int sign) {
  check_sign(sign);
  Mat<Scalar> out = bm.A.template cast<Scalar>();
  out -= (static_cast<double>(sign) * kappa) * bm.B.template cast<Scalar>();
  out += (kappa * kappa) * bm.C.template cast<Scalar>();
  return out;
}

// X+- as described in the header; `growing` selects between e^{kappa rho}
// (the literal matrices) and the equilibrated layout where the coupling
// entries are 1 and the diagonal carries e^{-kappa rho}.
template <typename Scalar>
Mat<Scalar> z_impl(const BoundaryMatrices& bm, Scalar kappa, bool growing) {
  const int ne = bm.n_external;
  const int ni = static_cast<int>(bm.rho.size());
  const int n = bm.dim();

  Mat<Scalar> xp = Mat<Scalar>::Identity(n, n);
  Mat<Scalar> xm = Mat<Scalar>::Identity(n, n);
  for (int e = 0; e < ne; ++e) xm(e, e) = Scalar(-1);
  for (int i = 0; i < ni; ++i) {
    const Scalar couple = growing ? std::exp(kappa * bm.rho[i]) : Scalar(1);
    const Scalar diag = growing ? Scalar(1) : std::exp(-kappa * bm.rho[i]);
    xp(ne + i, ne + i) = diag;
    xp(ne + ni + i, ne + ni + i) = diag;
    xm(ne + i, ne + i) = diag;
    xm(ne + ni + i, ne + ni + i) = diag;
    xp(ne + i, ne + ni + i) = couple;
    xp(ne + ni + i, ne + i) = couple;
    xm(ne + i, ne + ni + i) = -couple;
    xm(ne + ni + i, ne + i) = -couple;
  }

  const Mat<Scalar> ac =
      bm.A.template cast<Scalar>() + (kappa * kappa) * bm.C.template cast<Scalar>();
  return ac * xp + kappa * (bm.B.template cast<Scalar>() * xm);
}

template <typename Scalar>
DetInfo det_info_impl(const Mat<Scalar>& m) {
  DetInfo out;
  const auto n = m.rows();
  if (n == 0) {
    out.det = 1.0;
    out.log_abs = 0.0;
    out.normalized_abs = 1.0;
    return out;
  }

  double log_rows = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double rn = m.row(i).norm();
    if (rn == 0.0 || !std::isfinite(rn)) {
      out.log_abs = -std::numeric_limits<double>::infinity();
      return out;  // a zero (or overflowed) row: report as singular
    }
    log_rows += std::log(rn);
  }

  Eigen::PartialPivLU<Mat<Scalar>> lu(m);
  std::complex<double> phase =
      static_cast<double>(lu.permutationP().determinant());
  double log_abs = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> piv(lu.matrixLU()(i, i));
    const double a = std::abs(piv);
    if (a == 0.0) {
      out.log_abs = -std::numeric_limits<double>::infinity();
      return out;
    }
    log_abs += std::log(a);
    phase *= piv / a;
  }

  out.log_abs = log_abs;
  out.det = phase * std::exp(log_abs);
  out.normalized_abs = std::exp(log_abs - log_rows);
  return out;
}

}  // namespace

BoundaryMatrices assemble_boundary_matrices(const MetricGraph& g, const WentzellData& w) {
  BoundaryMatrices bm;
  bm.n_external = g.num_external();
  bm.rho.reserve(g.num_internal());
  for (int e = g.num_external(); e < g.num_edges(); ++e)
    bm.rho.push_back(g.edge_length(e));
  bm.perm_sign = g.vl_permutation_sign();

  const int n = g.num_vl_pairs();
  bm.A = Eigen::MatrixXd::Zero(n, n);
  bm.B = Eigen::MatrixXd::Zero(n, n);
  bm.C = Eigen::MatrixXd::Zero(n, n);

  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& ends = g.incident(v);
    const int deg = static_cast<int>(ends.size());
    std::vector<int> idx(deg);
    for (int j = 0; j < deg; ++j) idx[j] = g.end_index(ends[j]);

    bm.A(idx[0], idx[0]) = w.a(v);
    for (int j = 0; j < deg; ++j) bm.B(idx[0], idx[j]) = -w.b(g, v, j);
    bm.C(idx[0], idx[0]) = 0.5 * w.c(v);
    for (int j = 1; j < deg; ++j) {
      bm.C(idx[j], idx[j - 1]) = 1.0;
      bm.C(idx[j], idx[j]) = -1.0;
    }
  }
  return bm;
}

Eigen::MatrixXd secular_zhat(const BoundaryMatrices& bm, double kappa, int sign) {
  return zhat_impl<double>(bm, kappa, sign);
}

Eigen::MatrixXcd secular_zhat(const BoundaryMatrices& bm, std::complex<double> kappa,
                              int sign) {
  return zhat_impl<std::complex<double>>(bm, kappa, sign);
}

Eigen::MatrixXd z_matrix(const BoundaryMatrices& bm, double kappa) {
  return z_impl<double>(bm, kappa, /*growing=*/true);
}

Eigen::MatrixXcd z_matrix(const BoundaryMatrices& bm, std::complex<double> kappa) {
  return z_impl<std::complex<double>>(bm, kappa, /*growing=*/true);
}

Eigen::MatrixXd z_matrix_equilibrated(const BoundaryMatrices& bm, double kappa) {
  return z_impl<double>(bm, kappa, /*growing=*/false);
}

std::complex<double> block_det_closed_form(double a, double b_sum, double c, int degree,
                                           std::complex<double> kappa, int sign) {
  check_sign(sign);
  const std::complex<double> factor =
      a + static_cast<double>(sign) * kappa * b_sum + 0.5 * kappa * kappa * c;
  return factor * std::pow(-kappa * kappa, degree - 1);
}

std::complex<double> block_det_closed_form(const MetricGraph& g, const WentzellData& w,
                                           int v, std::complex<double> kappa, int sign) {
  return block_det_closed_form(w.a(v), w.b_sum(v), w.c(v), g.degree(v), kappa, sign);
}

DetInfo det_info(const Eigen::MatrixXd& m) { return det_info_impl<double>(m); }

DetInfo det_info(const Eigen::MatrixXcd& m) {
  return det_info_impl<std::complex<double>>(m);
}

InvertibilityScan find_invertibility_radius(const BoundaryMatrices& bm,
                                            std::vector<double> grid) {
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty scan grid");
  if (grid.front() <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "scan grid must be strictly positive");

  InvertibilityScan scan;
  scan.profile.reserve(grid.size());
  for (double k : grid) {
    DetScanRow row;
    row.kappa = k;
    row.plus = det_info(secular_zhat(bm, k, +1));
    row.minus = det_info(secular_zhat(bm, k, -1));
    row.z = det_info(z_matrix(bm, k));
    scan.profile.push_back(std::move(row));
  }

  // Smallest grid point from which on every later sample clears the bar.
  int tail_start = -1;
  for (int i = static_cast<int>(scan.profile.size()) - 1; i >= 0; --i) {
    const DetScanRow& r = scan.profile[i];
    if (r.plus.normalized_abs <= kSingularDetThreshold ||
        r.minus.normalized_abs <= kSingularDetThreshold)
      break;
    tail_start = i;
  }
  if (tail_start < 0)
    throw Error(ErrorCode::ScanInconclusive,
                "determinant never stabilizes above threshold on this grid; "
                "extend it to larger kappa");
  scan.radius = grid[tail_start];
  return scan;
}

}  // namespace graphbm
