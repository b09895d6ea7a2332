// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#include "graphbm/edge_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace graphbm {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Zero samples at step <= h. Internal edges span their full length so later
// solves inherit a usable resolution; external edges stay minimal (two nodes
// h apart) since zero extends past any grid anyway.
EdgeGrid zero_grid(bool internal, double length, double h) {
  EdgeGrid g;
  if (internal) {
    const auto n = std::max<size_t>(2, static_cast<size_t>(std::ceil(length / h)) + 1);
    g.dx = length / static_cast<double>(n - 1);
    g.v.assign(n, 0.0);
  } else {
    g.dx = h;
    g.v = {0.0, 0.0};
  }
  g.support_lo = 0.0;
  g.support_hi = -1.0;
  return g;
}
}  // namespace

EdgeFunction EdgeFunction::zero(const MetricGraph& g, double h) {
  std::vector<EdgeGrid> grids;
  grids.reserve(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e)
    grids.push_back(zero_grid(g.is_internal(e), g.edge_length(e), h));
  return EdgeFunction(std::move(grids));
}

double EdgeFunction::eval(const MetricGraph& g, const GraphPoint& p) const {
  switch (p.kind) {
    case GraphPoint::Kind::Cemetery:
      return 0.0;
    case GraphPoint::Kind::Vertex:
      return vertex_value(g, p.vertex);
    case GraphPoint::Kind::EdgePoint:
      return eval(p.edge, p.x);
  }
  return 0.0;
}

double EdgeFunction::vertex_value(const MetricGraph& g, int v) const {
  const EdgeEnd& ee = g.incident(v).front();
  return trace(ee.edge, ee.at_far_end);
}

double EdgeFunction::sup_norm() const {
  double m = 0.0;
  for (const auto& e : edges_)
    for (double x : e.v) m = std::max(m, std::fabs(x));
  return m;
}

double EdgeFunction::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : edges_)
    for (double x : e.v) m = std::min(m, x);
  return m;
}

double sup_abs_combination(
    const std::vector<std::pair<double, const EdgeFunction*>>& terms) {
  if (terms.empty()) return 0.0;
  const int ne = terms.front().second->num_edges();
  double sup = 0.0;
  for (int e = 0; e < ne; ++e) {
    for (const auto& [_, owner] : terms) {
      const EdgeGrid& grid = owner->grid(e);
      for (size_t j = 0; j < grid.v.size(); ++j) {
        const double x = grid.dx * static_cast<double>(j);
        double acc = 0.0;
        for (const auto& [coeff, fn] : terms) acc += coeff * fn->eval(e, x);
        sup = std::max(sup, std::fabs(acc));
      }
    }
  }
  return sup;
}

void EdgeFunction::axpy(double s, const EdgeFunction& other) {
  if (other.edges_.size() != edges_.size())
    throw Error(ErrorCode::InvalidArgument, "axpy on functions of different graphs");
  for (size_t e = 0; e < edges_.size(); ++e) {
    auto& a = edges_[e];
    const auto& b = other.edges_[e];
    if (b.v.size() != a.v.size() || b.dx != a.dx)
      throw Error(ErrorCode::InvalidArgument, "axpy on mismatched grids");
    for (size_t i = 0; i < a.v.size(); ++i) a.v[i] += s * b.v[i];
    if (!b.empty_support()) {
      a.support_lo = a.empty_support() ? b.support_lo : std::min(a.support_lo, b.support_lo);
      a.support_hi = a.empty_support() ? b.support_hi : std::max(a.support_hi, b.support_hi);
    }
  }
}

void EdgeFunction::scale(double s) {
  for (auto& e : edges_)
    for (double& x : e.v) x *= s;
}

void validate_function(const MetricGraph& g, const EdgeFunction& f, double tol_rel) {
  if (f.num_edges() != g.num_edges())
    throw Error(ErrorCode::FunctionInvalid, "function not defined on this graph");
  const double tol = tol_rel * std::max(f.sup_norm(), 1e-300);

  for (int v = 0; v < g.num_vertices(); ++v) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& ee : g.incident(v)) {
      const double t = f.trace(ee.edge, ee.at_far_end);
      lo = first ? t : std::min(lo, t);
      hi = first ? t : std::max(hi, t);
      first = false;
    }
    if (hi - lo > tol)
      throw Error(ErrorCode::FunctionInvalid,
                  "traces disagree at vertex '" + g.vertex_id(v) + "' by " +
                      std::to_string(hi - lo));
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    if (g.is_internal(e)) {
      if (std::fabs(f.grid(e).extent() - g.edge_length(e)) > 1e-9 * g.edge_length(e))
        throw Error(ErrorCode::FunctionInvalid,
                    "grid extent mismatch on internal edge '" + g.edge_id(e) + "'");
    } else if (std::fabs(f.grid(e).v.back()) > tol) {
      throw Error(ErrorCode::FunctionInvalid,
                  "no decay at the truncation radius of external edge '" + g.edge_id(e) + "'");
    }
  }
}

FunctionBuilder::FunctionBuilder(const MetricGraph& g, double h) : g_(&g), h_(h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw Error(ErrorCode::InvalidArgument, "grid step must be positive and finite");
  grids_.reserve(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e)
    grids_.push_back(zero_grid(g.is_internal(e), g.edge_length(e), h));
}

int FunctionBuilder::resolve(const std::string& edge_id) const {
  const int e = g_->edge_index(edge_id);
  if (e < 0) throw Error(ErrorCode::KeyMismatch, "unknown edge '" + edge_id + "'");
  return e;
}

void FunctionBuilder::sample_onto(int e, double lo, double hi, double extent,
                                  const std::function<double(double)>& fn) {
  EdgeGrid g;
  const double len = g_->is_internal(e) ? g_->edge_length(e) : extent;
  const auto n = std::max<size_t>(2, static_cast<size_t>(std::ceil(len / h_)) + 1);
  g.dx = len / static_cast<double>(n - 1);
  g.v.resize(n);
  for (size_t i = 0; i < n; ++i) g.v[i] = fn(g.dx * static_cast<double>(i));
  g.support_lo = std::max(0.0, lo);
  g.support_hi = std::min(len, hi);
  grids_[e] = std::move(g);
}

FunctionBuilder& FunctionBuilder::bump(const std::string& edge_id, double center, double width) {
  if (width <= 0.0) throw Error(ErrorCode::InvalidArgument, "bump width must be positive");
  const int e = resolve(edge_id);
  auto fn = [center, width](double x) {
    const double u = std::fabs(x - center);
    if (u >= width) return 0.0;
    const double c = std::cos(kPi * (x - center) / (2.0 * width));
    return c * c;
  };
  sample_onto(e, center - width, center + width, center + width + 0.5, fn);
  return *this;
}

FunctionBuilder& FunctionBuilder::exp_decay(const std::string& edge_id, double rate, double amp) {
  if (rate <= 0.0) throw Error(ErrorCode::InvalidArgument, "decay rate must be positive");
  const int e = resolve(edge_id);
  const double extent = 21.0 / rate;  // e^{-21} < 1e-9
  sample_onto(e, 0.0, extent, extent,
              [rate, amp](double x) { return amp * std::exp(-rate * x); });
  return *this;
}

FunctionBuilder& FunctionBuilder::indicator(const std::string& edge_id, double lo, double hi,
                                            double s) {
  if (!(hi > lo) || s <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "indicator needs hi > lo and s > 0");
  const int e = resolve(edge_id);
  auto ramp = [](double t) {  // smoothstep on [0,1]
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * (3.0 - 2.0 * t);
  };
  auto fn = [=](double x) {
    return ramp((x - (lo - s)) / (2.0 * s)) * ramp(((hi + s) - x) / (2.0 * s));
  };
  sample_onto(e, lo - s, hi + s, hi + s + 0.5, fn);
  return *this;
}

FunctionBuilder& FunctionBuilder::constant(const std::string& edge_id, double value) {
  const int e = resolve(edge_id);
  sample_onto(e, 0.0, kInfiniteDistance, 1.0, [value](double) { return value; });
  return *this;
}

FunctionBuilder& FunctionBuilder::samples(const std::string& edge_id, double dx,
                                          std::vector<double> values) {
  if (dx <= 0.0 || values.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "need dx > 0 and at least two samples");
  const int e = resolve(edge_id);
  EdgeGrid g;
  g.dx = dx;
  g.v = std::move(values);
  if (g_->is_internal(e) &&
      std::fabs(g.extent() - g_->edge_length(e)) > 1e-9 * g_->edge_length(e))
    throw Error(ErrorCode::InvalidArgument,
                "samples on internal edge '" + edge_id + "' must span its length");
  g.support_lo = 0.0;
  g.support_hi = g.extent();
  grids_[e] = std::move(g);
  return *this;
}

EdgeFunction FunctionBuilder::build() const { return EdgeFunction(grids_); }

}  // namespace graphbm
