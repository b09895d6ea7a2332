// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#include "graphbm/wentzell.hpp"

#include <cmath>

namespace graphbm {

namespace {
constexpr double kSnap = 1e-15;      // below this a coefficient is exactly 0
constexpr double kRowTol = 1e-12;    // |a + sum b + c - 1| tolerance

double snapped(double x) { return std::fabs(x) < kSnap ? 0.0 : x; }
}  // namespace

WentzellData WentzellData::validate(const MetricGraph& g,
                                    const std::map<std::string, VertexDataSpec>& data,
                                    bool renormalize) {
  WentzellData w;
  const int nv = g.num_vertices();
  w.a_.resize(nv);
  w.c_.resize(nv);
  w.bsum_.resize(nv);
  w.vl_base_.resize(nv);
  w.b_.reserve(g.num_vl_pairs());

  for (const auto& [id, unused] : data)
    if (g.vertex_index(id) < 0)
      throw Error(ErrorCode::KeyMismatch, "data given for unknown vertex '" + id + "'");

  for (int v = 0; v < nv; ++v) {
    const std::string& vid = g.vertex_id(v);
    auto it = data.find(vid);
    if (it == data.end())
      throw Error(ErrorCode::KeyMismatch, "no data for vertex '" + vid + "'");
    const VertexDataSpec& d = it->second;

    double a = snapped(d.a), c = snapped(d.c);
    if (a < 0.0 || c < 0.0)
      throw Error(ErrorCode::NegativeCoefficient, "a or c negative at '" + vid + "'");

    // b keys must be exactly the incident edges. Parallel edges carry one key
    // per edge id, which is unambiguous because loops are rejected.
    const auto& inc = g.incident(v);
    if (d.b.size() != inc.size())
      throw Error(ErrorCode::KeyMismatch,
                  "vertex '" + vid + "': " + std::to_string(d.b.size()) +
                      " b-entries for " + std::to_string(inc.size()) + " incident edges");
    w.vl_base_[v] = static_cast<int>(w.b_.size());
    double bsum = 0.0;
    for (const auto& ee : inc) {
      auto bit = d.b.find(g.edge_id(ee.edge));
      if (bit == d.b.end())
        throw Error(ErrorCode::KeyMismatch, "vertex '" + vid + "': missing b for edge '" +
                                                g.edge_id(ee.edge) + "'");
      double bv = snapped(bit->second);
      if (bv < 0.0)
        throw Error(ErrorCode::NegativeCoefficient,
                    "b negative at '" + vid + "' / '" + g.edge_id(ee.edge) + "'");
      w.b_.push_back(bv);
      bsum += bv;
    }

    double row = a + bsum + c;
    if (renormalize && row > 0.0) {
      a /= row;
      c /= row;
      for (size_t k = w.b_.size() - inc.size(); k < w.b_.size(); ++k) w.b_[k] /= row;
      bsum /= row;
      row = 1.0;
    }
    if (std::fabs(row - 1.0) > kRowTol)
      throw Error(ErrorCode::NormalizationViolation,
                  "vertex '" + vid + "': a + sum(b) + c = " + std::to_string(row));
    if (bsum == 0.0 && c == 0.0)
      throw Error(ErrorCode::DirichletExcluded,
                  "vertex '" + vid + "' has b = c = 0 (a = 1)");

    w.a_[v] = a;
    w.c_[v] = c;
    w.bsum_[v] = bsum;
  }
  return w;
}

VertexClass WentzellData::classify(int v) const {
  if (bsum_[v] > 0.0) return {VertexKind::Instantaneous, 0.0};
  if (a_[v] == 0.0) return {VertexKind::Trap, 0.0};
  // b = 0 and a > 0; c = 1 - a > 0 because a = 1 is excluded.
  return {VertexKind::HoldingKilling, a_[v] / c_[v]};
}

}  // namespace graphbm
