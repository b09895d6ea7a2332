// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "graphbm/graph.hpp"

namespace graphbm {

// Vertex boundary data (a_v, b_{v,l}, c_v): at every vertex
//
//   a_v f(v) - sum_l b_{v,l} f'(v_l) + (c_v/2) f''(v) = 0,
//
// with f'(v_l) the derivative pointing into edge l, all coefficients
// nonnegative and a_v + sum_l b_{v,l} + c_v = 1. a_v = 1 (equivalently
// b = c = 0, pure Dirichlet) is excluded.

struct VertexDataSpec {
  double a = 0.0;
  double c = 0.0;
  std::map<std::string, double> b;  // edge id -> coefficient
};

enum class VertexKind {
  Trap,            // b = 0, a = 0: the path freezes on arrival
  HoldingKilling,  // b = 0, a > 0: exponential holding, then killed
  Instantaneous,   // b > 0: leaves immediately (up to sticky delay)
};

struct VertexClass {
  VertexKind kind;
  double beta;  // holding/killing rate a/c; 0 for traps, unused otherwise
};

class WentzellData {
 public:
  // Validates per-vertex data against the graph. Coefficients below 1e-15
  // are snapped to exact zero before validation; row sums must be within
  // 1e-12 of 1. Throws NegativeCoefficient / NormalizationViolation /
  // DirichletExcluded / KeyMismatch.
  static WentzellData validate(const MetricGraph& g,
                               const std::map<std::string, VertexDataSpec>& data,
                               bool renormalize = false);

  double a(int v) const { return a_[v]; }
  double c(int v) const { return c_[v]; }
  // b for vertex-major slot k (aligned with MetricGraph::vl_to_end()).
  double b_vl(int k) const { return b_[k]; }
  // b for the j-th incident edge end of vertex v. The graph argument pins the
  // meaning of j (position in g.incident(v)) even though the lookup is flat.
  double b(const MetricGraph&, int v, int j) const { return b_[vl_base_[v] + j]; }
  double b_sum(int v) const { return bsum_[v]; }

  VertexClass classify(int v) const;

 private:
  std::vector<double> a_, c_, bsum_;
  std::vector<double> b_;        // vertex-major order
  std::vector<int> vl_base_;     // first vertex-major slot of each vertex
};

}  // namespace graphbm
