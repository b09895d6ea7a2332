// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo simulation of the graph diffusion and estimators for the
// quantities the analytic engine computes: discounted occupation integrals
// (resolvent), hitting-time Laplace transforms, and fixed-time expectations
// (semigroup).
//
// Within an edge the motion is exactly Brownian and is advanced by exact
// first-passage / exit-time sampling (no time discretization). Vertices are
// resolved by an ε-shell scheme: a visit to vertex v is expanded into
//   - local time to the first ε-escape, L ~ Exponential(mean ε),
//   - an elastic kill clock at rate a_v/b̄ per unit local time raced against L,
//   - a sticky lag of (c_v/b̄)·(local time served) spent pinned at v,
//   - routing of the escaping excursion to edge l with probability b_{v,l}/b̄,
//   - the escape duration: the hitting time of ε by reflected Brownian motion.
// The scheme's bias is O(ε) and is the quantity the calibration tests measure
// against the analytic oracle. Trap and holding-killing vertices are exact.
#pragma once

#include <cstdint>
#include <vector>

#include "graphbm/edge_function.hpp"
#include "graphbm/errors.hpp"
#include "graphbm/graph.hpp"
#include "graphbm/rng.hpp"
#include "graphbm/wentzell.hpp"

namespace graphbm {

struct SimConfig {
  double eps = 0.01;        // vertex shell radius
  std::uint64_t seed = 1;   // base seed; path k uses stream k+1
  int n_paths = 10000;
  double horizon = 0.0;     // <= 0: estimator-specific default
  std::vector<double> record_grid;  // simulate_path: sample times (sorted)
};

// ShellTooLarge unless 0 < eps < min(edge lengths)/2; InvalidArgument on a
// nonpositive path count.
void validate_sim_config(const MetricGraph& g, const SimConfig& cfg);

// Outcome of one shell excursion at an instantaneous or holding-killing
// vertex. `lag` is the time spent pinned at the vertex itself (sticky lag,
// or the full holding time); `elapsed` additionally includes the escape
// duration when an edge was entered.
struct VertexExcursion {
  bool killed = false;
  double elapsed = 0.0;
  double lag = 0.0;
  int edge = -1;            // entered edge (valid iff !killed)
  bool from_far_end = false;  // the vertex sits at that edge's far end
};

// Single shell step at vertex v. Throws InvalidArgument at a trap vertex
// (the caller must short-circuit: the path never leaves a trap).
VertexExcursion vertex_excursion(Rng& rng, const MetricGraph& g,
                                 const WentzellData& w, int v, double eps);

struct PathRecord {
  double time = 0.0;
  GraphPoint pos;
};

struct PathTrajectory {
  std::vector<PathRecord> records;        // strictly increasing times
  double lifetime = kInfiniteDistance;    // kill time; +inf while alive
};

// One trajectory from `start` up to `horizon`. Without a record grid the
// records are events: the start point, vertex arrivals, shell escapes (edge
// entries), and the terminal jump to the cemetery. With cfg.record_grid the
// records are instead the positions at the grid times (plus the kill event),
// obtained by deadline-bisection: a straddling excursion freezes the sample
// at its center, an O(√(remaining)) spatial fuzz that vanishes as the
// deadline is approached and is symmetric to leading order.
PathTrajectory simulate_path(Rng& rng, const MetricGraph& g, const WentzellData& w,
                             const GraphPoint& start, double horizon,
                             const SimConfig& cfg);

struct EstimatorResult {
  double mean = 0.0;
  double std_error = 0.0;   // sample standard deviation / sqrt(n)
  int n_paths = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
};

// E_start ∫_0^ζ e^{-λt} f(X_t) dt. Within-edge contributions are the exact
// conditional expectations of each step's integral (Green's function of the
// exit problem), so the only bias is the ε-shell's. Default horizon
// ln(1e5)/λ; the mass abandoned past it is < 1e-5 · sup|f|/λ.
EstimatorResult estimate_resolvent(const MetricGraph& g, const WentzellData& w,
                                   const GraphPoint& start, const EdgeFunction& f,
                                   double lambda, const SimConfig& cfg);

// Same integral stopped at the first hit of `absorb_vertex`:
// E ∫_0^{ζ ∧ H_v} e^{-λt} f dt — the first half of the first-passage
// decomposition.
EstimatorResult estimate_resolvent_absorbed(const MetricGraph& g,
                                            const WentzellData& w,
                                            const GraphPoint& start,
                                            const EdgeFunction& f, double lambda,
                                            int absorb_vertex,
                                            const SimConfig& cfg);

// E_start e^{-λ H_v} for the target vertex; killed or timed-out paths
// contribute 0. Default horizon ln(1e4)/λ (truncation < 1e-4).
EstimatorResult estimate_hitting_laplace(const MetricGraph& g,
                                         const WentzellData& w,
                                         const GraphPoint& start, int target_vertex,
                                         double lambda, const SimConfig& cfg);

// E_start f(X_t) with f(Δ) = 0, by deadline-bisected exact stepping: shell
// visits and exits are sampled exactly; when a step would overshoot the
// deadline the position is frozen at the step's center (symmetric, so the
// leading bias is O(r²·f″) with r ≤ ½√(time remaining)).
EstimatorResult estimate_semigroup_value(const MetricGraph& g,
                                         const WentzellData& w,
                                         const GraphPoint& start,
                                         const EdgeFunction& f, double t,
                                         const SimConfig& cfg);

}  // namespace graphbm
