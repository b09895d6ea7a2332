// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#include "graphbm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace graphbm {
namespace {

// Parity of a permutation given as an image table.
int permutation_sign(std::vector<int> p) {
  int sign = 1;
  std::vector<bool> seen(p.size(), false);
  for (size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    size_t j = i, len = 0;
    while (!seen[j]) {
      seen[j] = true;
      j = static_cast<size_t>(p[j]);
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

}  // namespace

MetricGraph MetricGraph::validate(const GraphSpec& spec) {
  MetricGraph g;

  if (spec.vertices.empty())
    throw Error(ErrorCode::GraphStructure, "graph has no vertices");

  g.vertex_ids_ = spec.vertices;
  std::sort(g.vertex_ids_.begin(), g.vertex_ids_.end());
  for (size_t i = 1; i < g.vertex_ids_.size(); ++i)
    if (g.vertex_ids_[i] == g.vertex_ids_[i - 1])
      throw Error(ErrorCode::DuplicateId, "vertex id '" + g.vertex_ids_[i] + "'");

  std::unordered_map<std::string, int> vidx;
  for (int i = 0; i < static_cast<int>(g.vertex_ids_.size()); ++i)
    vidx[g.vertex_ids_[i]] = i;

  auto ext = spec.external_edges;
  auto intl = spec.internal_edges;
  std::sort(ext.begin(), ext.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(intl.begin(), intl.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  std::set<std::string> edge_ids_seen;
  auto claim_id = [&](const std::string& id) {
    if (!edge_ids_seen.insert(id).second)
      throw Error(ErrorCode::DuplicateId, "edge id '" + id + "'");
  };

  g.n_external_ = static_cast<int>(ext.size());
  g.n_internal_ = static_cast<int>(intl.size());
  for (const auto& e : ext) {
    claim_id(e.id);
    auto it = vidx.find(e.vertex);
    if (it == vidx.end())
      throw Error(ErrorCode::DanglingEndpoint,
                  "external edge '" + e.id + "' attached to unknown vertex '" + e.vertex + "'");
    g.edge_ids_.push_back(e.id);
    g.lengths_.push_back(kInfiniteDistance);
    g.edge_from_.push_back(it->second);
    g.edge_to_.push_back(-1);
  }
  for (const auto& e : intl) {
    claim_id(e.id);
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw Error(ErrorCode::NonpositiveLength,
                  "internal edge '" + e.id + "' has length " + std::to_string(e.length));
    auto uf = vidx.find(e.from), ut = vidx.find(e.to);
    if (uf == vidx.end() || ut == vidx.end())
      throw Error(ErrorCode::DanglingEndpoint,
                  "internal edge '" + e.id + "' references an unknown vertex");
    if (uf->second == ut->second)
      throw Error(ErrorCode::UnsupportedLoop,
                  "internal edge '" + e.id + "' is a loop at '" + e.from + "'");
    g.edge_ids_.push_back(e.id);
    g.lengths_.push_back(e.length);
    g.edge_from_.push_back(uf->second);
    g.edge_to_.push_back(ut->second);
  }

  // Incidence lists. Edge ends inherit the global edge order (externals
  // before internals, each ascending by id), which fixes the vertex-major
  // ordering below.
  g.incident_.resize(g.vertex_ids_.size());
  for (int e = 0; e < g.num_edges(); ++e) {
    g.incident_[g.edge_from_[e]].push_back({e, false});
    if (g.is_internal(e)) g.incident_[g.edge_to_[e]].push_back({e, true});
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (g.incident_[v].empty())
      throw Error(ErrorCode::GraphStructure,
                  "vertex '" + g.vertex_ids_[v] + "' has no incident edges");
    std::sort(g.incident_[v].begin(), g.incident_[v].end(),
              [](const EdgeEnd& a, const EdgeEnd& b) {
                if (a.edge != b.edge) return a.edge < b.edge;
                return a.at_far_end < b.at_far_end;
              });
  }

  for (int v = 0; v < g.num_vertices(); ++v)
    for (const auto& ee : g.incident_[v]) {
      g.vl_to_end_.push_back(g.end_index(ee));
      g.vl_vertex_.push_back(v);
    }
  g.perm_sign_ = permutation_sign(g.vl_to_end_);

  // All-pairs vertex distances over internal edges (Floyd-Warshall; the
  // graphs here are small). External edges connect nothing.
  const int n = g.num_vertices();
  g.vdist_.assign(n, std::vector<double>(n, kInfiniteDistance));
  for (int v = 0; v < n; ++v) g.vdist_[v][v] = 0.0;
  for (int e = g.n_external_; e < g.num_edges(); ++e) {
    const int u = g.edge_from_[e], w = g.edge_to_[e];
    g.vdist_[u][w] = std::min(g.vdist_[u][w], g.lengths_[e]);
    g.vdist_[w][u] = g.vdist_[u][w];
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        g.vdist_[i][j] = std::min(g.vdist_[i][j], g.vdist_[i][k] + g.vdist_[k][j]);

  return g;
}

int MetricGraph::vertex_index(const std::string& id) const {
  auto it = std::lower_bound(vertex_ids_.begin(), vertex_ids_.end(), id);
  if (it == vertex_ids_.end() || *it != id) return -1;
  return static_cast<int>(it - vertex_ids_.begin());
}

int MetricGraph::edge_index(const std::string& id) const {
  for (int e = 0; e < num_edges(); ++e)
    if (edge_ids_[e] == id) return e;
  return -1;
}

double MetricGraph::edge_length(int e) const { return lengths_[e]; }

GraphPoint MetricGraph::canonicalize(const GraphPoint& p) const {
  if (p.kind != GraphPoint::Kind::EdgePoint) return p;
  if (p.x < 0.0 || (is_internal(p.edge) && p.x > lengths_[p.edge]))
    throw Error(ErrorCode::InvalidArgument, "edge coordinate out of range");
  if (p.x == 0.0) return GraphPoint::at_vertex(edge_from_[p.edge]);
  if (is_internal(p.edge) && p.x == lengths_[p.edge])
    return GraphPoint::at_vertex(edge_to_[p.edge]);
  return p;
}

double MetricGraph::distance(const GraphPoint& pin, const GraphPoint& qin) const {
  const GraphPoint p = canonicalize(pin), q = canonicalize(qin);
  if (p.kind == GraphPoint::Kind::Cemetery || q.kind == GraphPoint::Kind::Cemetery)
    return (p.kind == q.kind) ? 0.0 : kInfiniteDistance;

  // Offsets to each endpoint vertex of the carrying edge.
  struct Anchor {
    int vertex;
    double offset;
  };
  auto anchors = [&](const GraphPoint& r, Anchor out[2]) -> int {
    if (r.kind == GraphPoint::Kind::Vertex) {
      out[0] = {r.vertex, 0.0};
      return 1;
    }
    out[0] = {edge_from_[r.edge], r.x};
    if (is_internal(r.edge)) {
      out[1] = {edge_to_[r.edge], lengths_[r.edge] - r.x};
      return 2;
    }
    return 1;
  };

  double best = kInfiniteDistance;
  if (p.kind == GraphPoint::Kind::EdgePoint && q.kind == GraphPoint::Kind::EdgePoint &&
      p.edge == q.edge)
    best = std::fabs(p.x - q.x);

  Anchor ap[2], aq[2];
  const int np = anchors(p, ap), nq = anchors(q, aq);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < nq; ++j)
      best = std::min(best, ap[i].offset + vdist_[ap[i].vertex][aq[j].vertex] + aq[j].offset);
  return best;
}

double MetricGraph::min_internal_length() const {
  double m = kInfiniteDistance;
  for (int e = n_external_; e < num_edges(); ++e) m = std::min(m, lengths_[e]);
  return m;
}

}  // namespace graphbm
