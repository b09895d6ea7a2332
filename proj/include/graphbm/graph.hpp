// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "graphbm/errors.hpp"

namespace graphbm {

// A finite metric graph: vertices, internal edges of finite length glued at
// both ends, and external edges (half-lines) glued at one end.
//
// Local coordinates: an internal edge i is [0, length_i] with its `from`
// vertex at 0 and its `to` vertex at length_i; an external edge is [0, inf)
// with its vertex at 0. Loops (from == to) are rejected; parallel edges are
// allowed. All id-based orderings are lexicographic, so a graph built from
// the same description is always indexed identically.

struct InternalEdgeSpec {
  std::string id;
  std::string from;  // vertex at coordinate 0
  std::string to;    // vertex at coordinate length
  double length = 0.0;
};

struct ExternalEdgeSpec {
  std::string id;
  std::string vertex;  // vertex at coordinate 0
};

struct GraphSpec {
  std::vector<std::string> vertices;
  std::vector<InternalEdgeSpec> internal_edges;
  std::vector<ExternalEdgeSpec> external_edges;
};

// A point of the graph in canonical form: either exactly a vertex, or an
// interior point of an edge. Edge points with coordinate 0 (or length, for
// internal edges) canonicalize to the corresponding vertex.
struct GraphPoint {
  enum class Kind { Vertex, EdgePoint, Cemetery };
  Kind kind = Kind::Cemetery;
  int vertex = -1;  // valid when kind == Vertex
  int edge = -1;    // global edge index, valid when kind == EdgePoint
  double x = 0.0;   // coordinate on the edge, valid when kind == EdgePoint

  static GraphPoint at_vertex(int v) { return {Kind::Vertex, v, -1, 0.0}; }
  static GraphPoint on_edge(int e, double x) { return {Kind::EdgePoint, -1, e, x}; }
  static GraphPoint cemetery() { return {Kind::Cemetery, -1, -1, 0.0}; }
};

inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

// One end of an edge, as seen from an incident vertex. `edge` is the global
// edge index; `at_far_end` is true for the `to` end of an internal edge.
struct EdgeEnd {
  int edge = -1;
  bool at_far_end = false;
};

class MetricGraph {
 public:
  // Validates and canonicalizes. Throws Error with one of the graph codes on
  // nonpositive lengths, endpoints naming unknown vertices, loops, duplicate
  // ids, or isolated vertices.
  static MetricGraph validate(const GraphSpec& spec);

  // --- sizes ---
  int num_vertices() const { return static_cast<int>(vertex_ids_.size()); }
  int num_external() const { return n_external_; }
  int num_internal() const { return n_internal_; }
  int num_edges() const { return n_external_ + n_internal_; }
  // Number of (vertex, incident edge) pairs == |E| + 2|I|.
  int num_vl_pairs() const { return n_external_ + 2 * n_internal_; }

  // --- ids and indexing ---
  // Global edge order: external edges first (lexicographic by id), then
  // internal edges (lexicographic by id).
  const std::string& vertex_id(int v) const { return vertex_ids_[v]; }
  const std::string& edge_id(int e) const { return edge_ids_[e]; }
  int vertex_index(const std::string& id) const;  // -1 if unknown
  int edge_index(const std::string& id) const;    // -1 if unknown
  bool is_internal(int e) const { return e >= n_external_; }
  double edge_length(int e) const;  // +inf for external edges
  int edge_from(int e) const { return edge_from_[e]; }  // vertex at 0
  int edge_to(int e) const { return edge_to_[e]; }      // vertex at length; -1 for external

  // Incident edge ends of a vertex, externals before internals, ids ascending.
  const std::vector<EdgeEnd>& incident(int v) const { return incident_[v]; }
  int degree(int v) const { return static_cast<int>(incident_[v].size()); }

  // --- edge-end basis ---
  // Coefficient/value vectors are indexed by edge ends in the order
  // (externals at 0) (internals at 0) (internals at length);
  // size num_vl_pairs().
  int end_index_external(int e) const { return e; }
  int end_index_internal0(int e) const { return n_external_ + (e - n_external_); }
  int end_index_internal1(int e) const { return n_external_ + n_internal_ + (e - n_external_); }
  int end_index(const EdgeEnd& ee) const {
    if (!is_internal(ee.edge)) return end_index_external(ee.edge);
    return ee.at_far_end ? end_index_internal1(ee.edge) : end_index_internal0(ee.edge);
  }

  // (vertex, incident edge) pairs flattened in vertex-major order; entry k is
  // the edge-end index that pair refers to. The permutation taking edge-end
  // vectors to vertex-major vectors is f_vm[k] = f_end[vl_to_end(k)].
  const std::vector<int>& vl_to_end() const { return vl_to_end_; }
  // Which vertex owns vertex-major slot k.
  const std::vector<int>& vl_vertex() const { return vl_vertex_; }
  // det of the permutation (+1/-1), recorded at assembly.
  int vl_permutation_sign() const { return perm_sign_; }

  // --- geometry ---
  // Canonicalize an edge point whose coordinate lands on a vertex.
  GraphPoint canonicalize(const GraphPoint& p) const;
  // Path metric; +inf when p and q lie in different components.
  double distance(const GraphPoint& p, const GraphPoint& q) const;
  // Shortest vertex-to-vertex distance through internal edges; +inf if
  // disconnected.
  double vertex_distance(int u, int v) const { return vdist_[u][v]; }
  double min_internal_length() const;  // +inf when there are no internal edges

 private:
  MetricGraph() = default;

  std::vector<std::string> vertex_ids_;
  std::vector<std::string> edge_ids_;  // externals then internals
  int n_external_ = 0;
  int n_internal_ = 0;
  std::vector<double> lengths_;  // indexed like edge_ids_, +inf for externals
  std::vector<int> edge_from_;
  std::vector<int> edge_to_;
  std::vector<std::vector<EdgeEnd>> incident_;
  std::vector<int> vl_to_end_;
  std::vector<int> vl_vertex_;
  int perm_sign_ = 1;
  std::vector<std::vector<double>> vdist_;
};

}  // namespace graphbm
