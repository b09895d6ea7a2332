// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "graphbm/graph.hpp"

namespace graphbm {

// A scalar function on the graph, stored as uniform samples per edge with
// linear interpolation. External edges carry a finite sample extent
// (truncation radius) and evaluate to zero beyond it; the validator checks
// that the stored values have actually decayed there. Support bounds per
// edge let the path simulator skip integration over regions where f == 0.

struct EdgeGrid {
  double dx = 1.0;
  std::vector<double> v;          // samples at 0, dx, ..., (n-1) dx
  double support_lo = 0.0;        // conservative bounds of {f != 0};
  double support_hi = -1.0;       // lo > hi encodes empty support

  double extent() const { return dx * static_cast<double>(v.size() - 1); }
  bool empty_support() const { return support_lo > support_hi; }
};

class EdgeFunction {
 public:
  EdgeFunction() = default;
  explicit EdgeFunction(std::vector<EdgeGrid> grids) : edges_(std::move(grids)) {}

  // Zero function; internal edges carry a full-length grid at step <= h.
  static EdgeFunction zero(const MetricGraph& g, double h = 1e-3);

  int num_edges() const { return static_cast<int>(edges_.size()); }
  const EdgeGrid& grid(int e) const { return edges_[e]; }
  EdgeGrid& grid(int e) { return edges_[e]; }

  double eval(int e, double x) const {
    const EdgeGrid& g = edges_[e];
    if (x <= 0.0) return g.v.front();
    const double u = x / g.dx;
    const double last = static_cast<double>(g.v.size()) - 1.0;
    if (u >= last) return (u <= last + 1e-9) ? g.v.back() : 0.0;
    const auto i = static_cast<size_t>(u);
    const double w = u - static_cast<double>(i);
    return g.v[i] * (1.0 - w) + g.v[i + 1] * w;
  }

  double eval(const MetricGraph& g, const GraphPoint& p) const;

  // Trace at an edge end (x = 0 or x = extent).
  double trace(int e, bool far_end) const {
    return far_end ? edges_[e].v.back() : edges_[e].v.front();
  }

  // Common vertex value (trace of the first incident edge; callers are
  // expected to have run validate_function so traces agree).
  double vertex_value(const MetricGraph& g, int v) const;

  double sup_norm() const;
  double min_value() const;  // piecewise-linear minimum is attained at a node

  // In-place this += s * other. Grids must have identical shape.
  void axpy(double s, const EdgeFunction& other);
  void scale(double s);

 private:
  std::vector<EdgeGrid> edges_;
};

// sup over x of |sum_i coeff_i * f_i(x)| for functions on the same graph but
// possibly different grids. The combination is piecewise linear on the union
// partition of all sample nodes, so evaluating at every node of every term is
// exact.
double sup_abs_combination(const std::vector<std::pair<double, const EdgeFunction*>>& terms);

// Checks vertex single-valuedness (traces within tol_rel * sup_norm) and
// external tail decay (|f| at the truncation radius within tol_rel *
// sup_norm). Throws FunctionInvalid. tol_rel defaults to the documented
// 1e-9 contract.
void validate_function(const MetricGraph& g, const EdgeFunction& f, double tol_rel = 1e-9);

// --- builders ------------------------------------------------------------
// Every builder samples onto a uniform grid of target step h (the actual
// step divides the extent exactly). Internal edges always span [0, length].

struct FunctionBuilder {
  explicit FunctionBuilder(const MetricGraph& g, double h = 1e-3);

  // f(x) = cos^2(pi (x-center) / (2 width)) on |x - center| <= width.
  FunctionBuilder& bump(const std::string& edge_id, double center, double width);
  // f(x) = amp * exp(-rate x), truncated where it falls below 1e-9 * amp.
  FunctionBuilder& exp_decay(const std::string& edge_id, double rate, double amp = 1.0);
  // Smooth indicator of [lo, hi] with C^1 smoothstep ramps of half-width s.
  FunctionBuilder& indicator(const std::string& edge_id, double lo, double hi, double s);
  // Constant value on the whole edge (internal edges only pass validation).
  FunctionBuilder& constant(const std::string& edge_id, double value);
  // Uniformly sampled values starting at x = 0 with step dx.
  FunctionBuilder& samples(const std::string& edge_id, double dx, std::vector<double> values);

  EdgeFunction build() const;

 private:
  int resolve(const std::string& edge_id) const;
  void sample_onto(int e, double lo, double hi, double extent,
                   const std::function<double(double)>& fn);

  const MetricGraph* g_;
  double h_;
  std::vector<EdgeGrid> grids_;
};

}  // namespace graphbm
