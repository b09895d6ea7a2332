// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#include "graphbm/mc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "graphbm/resolvent.hpp"
#include "graphbm/samplers.hpp"

namespace graphbm {

namespace {

// Evaluate a grid that continues as a decaying exponential past its last node
// (the free-space integral of a function supported inside the grid).
double eval_decaying(const EdgeGrid& g, double kappa, double x) {
  if (x <= 0.0) return g.v.front();
  const double last = static_cast<double>(g.v.size()) - 1.0;
  const double u = x / g.dx;
  if (u >= last) return g.v.back() * std::exp(-kappa * g.dx * (u - last));
  const auto i = static_cast<size_t>(u);
  const double w = u - static_cast<double>(i);
  return g.v[i] * (1.0 - w) + g.v[i + 1] * w;
}

// Exact per-step expectations for the discounted-integral estimator:
// psi(e, x) = E_x [ int_0^tau e^{-lambda s} f~(X_s) ds ] for the within-edge
// exit problem (tau = exit from the whole edge; on external edges, the hit
// of the vertex). psi solves lambda psi - psi''/2 = f~ with zero boundary
// values at the exit set, assembled from the free-space integral plus the
// decaying homogeneous modes; every coefficient is O(1) data per edge.
struct EdgePsi {
  EdgeGrid ufree;
  double coef0 = 0.0;     // coefficient of e^{-kappa x}
  double coef1 = 0.0;     // coefficient of e^{-kappa (rho - x)} (internal only)
  double rho = kInfiniteDistance;
};

struct PsiTable {
  double lambda = 0.0;
  double kappa = 0.0;
  std::vector<EdgePsi> edges;
  std::vector<double> f_vertex;

  double psi(int e, double x) const {
    const EdgePsi& p = edges[static_cast<size_t>(e)];
    double val = eval_decaying(p.ufree, kappa, x) + p.coef0 * std::exp(-kappa * x);
    if (p.rho < kInfiniteDistance) val += p.coef1 * std::exp(-kappa * (p.rho - x));
    return val;
  }
};

PsiTable build_psi_table(const MetricGraph& g, const EdgeFunction& f, double lambda) {
  PsiTable tab;
  tab.lambda = lambda;
  tab.kappa = kappa_of(lambda);
  tab.edges.resize(static_cast<size_t>(g.num_edges()));
  for (int e = 0; e < g.num_edges(); ++e) {
    EdgePsi& p = tab.edges[static_cast<size_t>(e)];
    p.ufree = free_space_integral(f.grid(e), tab.kappa);
    const double u0 = p.ufree.v.front();
    if (g.is_internal(e)) {
      p.rho = g.edge_length(e);
      const double urho = p.ufree.v.back();
      const double gf = std::exp(-tab.kappa * p.rho);
      const double den = 1.0 - gf * gf;
      p.coef0 = (-u0 + gf * urho) / den;
      p.coef1 = (-urho + gf * u0) / den;
    } else {
      p.coef0 = -u0;
    }
  }
  tab.f_vertex.resize(static_cast<size_t>(g.num_vertices()));
  for (int v = 0; v < g.num_vertices(); ++v)
    tab.f_vertex[static_cast<size_t>(v)] = f.vertex_value(g, v);
  return tab;
}

struct MarchState {
  bool at_vertex = false;
  int vertex = -1;
  int edge = -1;
  double x = 0.0;
  double t = 0.0;
};

MarchState start_state(const MetricGraph& g, const GraphPoint& start) {
  const GraphPoint p = g.canonicalize(start);
  if (p.kind == GraphPoint::Kind::Cemetery)
    throw Error(ErrorCode::InvalidArgument, "paths cannot start at the cemetery");
  MarchState s;
  if (p.kind == GraphPoint::Kind::Vertex) {
    s.at_vertex = true;
    s.vertex = p.vertex;
  } else {
    s.edge = p.edge;
    s.x = p.x;
  }
  return s;
}

// Advance from an edge interior point to the next vertex arrival (exact in
// law); returns the elapsed time.
double edge_to_vertex_step(Rng& rng, const MetricGraph& g, MarchState& s) {
  double tau;
  if (g.is_internal(s.edge)) {
    const TwoSidedExit ex = sample_two_sided_exit(rng, s.x, g.edge_length(s.edge));
    s.vertex = ex.side == 0 ? g.edge_from(s.edge) : g.edge_to(s.edge);
    tau = ex.time;
  } else {
    tau = sample_one_sided_fpt(rng, s.x);
    s.vertex = g.edge_from(s.edge);
  }
  s.at_vertex = true;
  s.edge = -1;
  return tau;
}

void leave_vertex(const MetricGraph& g, MarchState& s, const VertexExcursion& exc,
                  double eps) {
  s.at_vertex = false;
  s.vertex = -1;
  s.edge = exc.edge;
  s.x = exc.from_far_end ? g.edge_length(exc.edge) - eps : eps;
}

// One path of the discounted occupation integral. absorb < 0 disables the
// stopping vertex.
double resolvent_path(Rng& rng, const MetricGraph& g, const WentzellData& w,
                      const PsiTable& tab, const MarchState& init, double lambda,
                      double eps, double horizon, int absorb) {
  MarchState s = init;
  double acc = 0.0;
  while (s.t <= horizon) {
    if (s.at_vertex) {
      const int v = s.vertex;
      if (v == absorb) break;
      const double disc = std::exp(-lambda * s.t);
      const double fv = tab.f_vertex[static_cast<size_t>(v)];
      const VertexClass vc = w.classify(v);
      if (vc.kind == VertexKind::Trap) {
        acc += disc * fv / lambda;  // frozen forever: exact tail
        break;
      }
      if (vc.kind == VertexKind::HoldingKilling) {
        // E int_0^{Exp(beta)} e^{-lambda s} ds = 1/(lambda + beta): exact,
        // kill included, zero variance.
        acc += disc * fv / (lambda + vc.beta);
        break;
      }
      const VertexExcursion exc = vertex_excursion(rng, g, w, v, eps);
      // Sticky lag: pinned at v for exc.lag (exact). The escape climb keeps
      // the path within the shell; crediting it to f(v) is part of the O(eps)
      // budget.
      acc += disc * fv * (-std::expm1(-lambda * exc.lag)) / lambda;
      if (exc.killed) break;
      const double climb = exc.elapsed - exc.lag;
      acc += disc * std::exp(-lambda * exc.lag) * fv *
             (-std::expm1(-lambda * climb)) / lambda;
      s.t += exc.elapsed;
      leave_vertex(g, s, exc, eps);
    } else {
      acc += std::exp(-lambda * s.t) * tab.psi(s.edge, s.x);
      s.t += edge_to_vertex_step(rng, g, s);
    }
  }
  return acc;
}

EstimatorResult run_paths(const SimConfig& cfg,
                          const std::function<double(Rng&)>& one_path) {
  long double sum = 0.0L, sumsq = 0.0L;
  for (int k = 0; k < cfg.n_paths; ++k) {
    Rng rng(cfg.seed, static_cast<std::uint64_t>(k) + 1);
    const double val = one_path(rng);
    sum += val;
    sumsq += static_cast<long double>(val) * val;
  }
  EstimatorResult res;
  res.n_paths = cfg.n_paths;
  res.eps = cfg.eps;
  res.seed = cfg.seed;
  const long double n = cfg.n_paths;
  res.mean = static_cast<double>(sum / n);
  if (cfg.n_paths > 1) {
    const long double var =
        std::max(0.0L, (sumsq - sum * sum / n) / (n - 1.0L));
    res.std_error = static_cast<double>(std::sqrt(static_cast<double>(var / n)));
  }
  return res;
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::InvalidArgument, "lambda must be positive and finite");
}

EstimatorResult resolvent_estimate(const MetricGraph& g, const WentzellData& w,
                                   const GraphPoint& start, const EdgeFunction& f,
                                   double lambda, int absorb, const SimConfig& cfg) {
  check_lambda(lambda);
  validate_sim_config(g, cfg);
  validate_function(g, f);
  const MarchState init = start_state(g, start);
  const double horizon = cfg.horizon > 0.0 ? cfg.horizon : std::log(1e5) / lambda;
  const PsiTable tab = build_psi_table(g, f, lambda);
  return run_paths(cfg, [&](Rng& rng) {
    return resolvent_path(rng, g, w, tab, init, lambda, cfg.eps, horizon, absorb);
  });
}

}  // namespace

void validate_sim_config(const MetricGraph& g, const SimConfig& cfg) {
  if (!(cfg.eps > 0.0) || !std::isfinite(cfg.eps))
    throw Error(ErrorCode::InvalidArgument, "shell radius must be positive");
  const double bound = 0.5 * g.min_internal_length();
  if (!(cfg.eps < bound))
    throw Error(ErrorCode::ShellTooLarge,
                "shell radius " + std::to_string(cfg.eps) +
                    " must be below half the shortest internal edge (" +
                    std::to_string(bound) + ")");
  if (cfg.n_paths < 1)
    throw Error(ErrorCode::InvalidArgument, "need at least one path");
  if (cfg.horizon < 0.0 || (cfg.horizon > 0.0 && !std::isfinite(cfg.horizon)))
    throw Error(ErrorCode::InvalidArgument, "horizon must be finite and nonnegative");
  for (size_t i = 0; i < cfg.record_grid.size(); ++i) {
    const double t = cfg.record_grid[i];
    if (!(t > 0.0) || !std::isfinite(t) ||
        (i > 0 && !(t > cfg.record_grid[i - 1])))
      throw Error(ErrorCode::InvalidArgument,
                  "record grid must be strictly increasing and positive");
  }
}

VertexExcursion vertex_excursion(Rng& rng, const MetricGraph& g,
                                 const WentzellData& w, int v, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw Error(ErrorCode::InvalidArgument, "shell radius must be positive");
  if (!(eps < 0.5 * g.min_internal_length()))
    throw Error(ErrorCode::ShellTooLarge,
                "shell radius reaches past the midpoint of an internal edge");
  const VertexClass vc = w.classify(v);
  if (vc.kind == VertexKind::Trap)
    throw Error(ErrorCode::InvalidArgument,
                "trap vertex '" + g.vertex_id(v) +
                    "': the path never leaves; the caller must short-circuit");

  VertexExcursion out;
  if (vc.kind == VertexKind::HoldingKilling) {
    out.killed = true;
    out.lag = out.elapsed = rng.exponential(vc.beta);
    return out;
  }

  // Instantaneous: local time to the first eps-escape is Exponential(mean
  // eps); the elastic kill clock runs at a/b per unit local time; the sticky
  // lag accrues at c/b per unit local time served.
  const double bsum = w.b_sum(v);
  const double theta = w.c(v) / bsum;
  const double local_time = rng.exponential_mean(eps);
  if (w.a(v) > 0.0) {
    const double kill_at = rng.exponential(w.a(v) / bsum);
    if (kill_at < local_time) {
      out.killed = true;
      out.lag = out.elapsed = theta * kill_at;
      return out;
    }
  }
  const auto& ends = g.incident(v);
  double u = rng.uniform() * bsum;
  size_t pick = ends.size() - 1;
  for (size_t j = 0; j < ends.size(); ++j) {
    u -= w.b(g, v, static_cast<int>(j));
    if (u <= 0.0) {
      pick = j;
      break;
    }
  }
  out.edge = ends[pick].edge;
  out.from_far_end = ends[pick].at_far_end;
  out.lag = theta * local_time;
  // Escape duration: reflected Brownian motion from the vertex first reaches
  // eps when an unreflected motion exits (-eps, eps).
  out.elapsed = out.lag + eps * eps * sample_centered_exit_time(rng);
  return out;
}

PathTrajectory simulate_path(Rng& rng, const MetricGraph& g, const WentzellData& w,
                             const GraphPoint& start, double horizon,
                             const SimConfig& cfg) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw Error(ErrorCode::InvalidArgument, "horizon must be positive and finite");
  validate_sim_config(g, cfg);
  MarchState s = start_state(g, start);

  PathTrajectory traj;
  const auto pos_of = [&]() {
    return s.at_vertex ? GraphPoint::at_vertex(s.vertex)
                       : GraphPoint::on_edge(s.edge, s.x);
  };
  traj.records.push_back({0.0, pos_of()});

  if (cfg.record_grid.empty()) {
    // Event mode: vertex arrivals, shell escapes, kills.
    while (true) {
      if (s.at_vertex) {
        const VertexClass vc = w.classify(s.vertex);
        if (vc.kind == VertexKind::Trap) break;
        if (vc.kind == VertexKind::HoldingKilling) {
          const double death = s.t + rng.exponential(vc.beta);
          if (death <= horizon) {
            traj.records.push_back({death, GraphPoint::cemetery()});
            traj.lifetime = death;
          }
          break;
        }
        const VertexExcursion exc = vertex_excursion(rng, g, w, s.vertex, cfg.eps);
        if (exc.killed) {
          const double death = s.t + exc.elapsed;
          if (death <= horizon) {
            traj.records.push_back({death, GraphPoint::cemetery()});
            traj.lifetime = death;
          }
          break;
        }
        s.t += exc.elapsed;
        if (s.t > horizon) break;
        leave_vertex(g, s, exc, cfg.eps);
        traj.records.push_back({s.t, pos_of()});
      } else {
        s.t += edge_to_vertex_step(rng, g, s);
        if (s.t > horizon) break;
        traj.records.push_back({s.t, pos_of()});
      }
    }
    return traj;
  }

  // Grid mode: sample the position at each grid time by deadline bisection.
  // A straddling step freezes the sample at its center (symmetric
  // O(sqrt(remaining)) fuzz) and the path resumes from there; holding stays
  // re-draw the remaining exponential at each grid time (memoryless, so the
  // law is unchanged).
  bool dead = false;
  for (double tg : cfg.record_grid) {
    if (tg > horizon) break;
    if (dead) break;
    while (s.t < tg && !dead) {
      const double remaining = tg - s.t;
      if (s.at_vertex) {
        const VertexClass vc = w.classify(s.vertex);
        if (vc.kind == VertexKind::Trap) {
          s.t = tg;
          break;
        }
        if (vc.kind == VertexKind::HoldingKilling) {
          const double wait = rng.exponential(vc.beta);
          if (wait >= remaining) {
            s.t = tg;
          } else {
            s.t += wait;
            traj.lifetime = s.t;
            dead = true;
          }
          break;
        }
        const VertexExcursion exc = vertex_excursion(rng, g, w, s.vertex, cfg.eps);
        if (exc.killed) {
          if (exc.elapsed >= remaining) {
            s.t = tg;  // deadline strikes mid-lag: still at the vertex
          } else {
            s.t += exc.elapsed;
            traj.lifetime = s.t;
            dead = true;
          }
          break;
        }
        if (exc.elapsed >= remaining) {
          s.t = tg;  // mid-lag (exact) or mid-climb (within the shell)
          break;
        }
        s.t += exc.elapsed;
        leave_vertex(g, s, exc, cfg.eps);
      } else {
        const double dlo = s.x;
        const double dhi = g.is_internal(s.edge) ? g.edge_length(s.edge) - s.x
                                                 : kInfiniteDistance;
        const double r = std::min({0.5 * std::sqrt(remaining), dlo, dhi});
        const TwoSidedExit ex = sample_two_sided_exit(rng, r, 2.0 * r);
        if (ex.time >= remaining) {
          s.t = tg;  // freeze at the step's center
          break;
        }
        s.t += ex.time;
        if (ex.side == 0) {
          if (r == dlo) {
            s.at_vertex = true;
            s.vertex = g.edge_from(s.edge);
            s.edge = -1;
          } else {
            s.x -= r;
          }
        } else {
          if (r == dhi) {
            s.at_vertex = true;
            s.vertex = g.edge_to(s.edge);
            s.edge = -1;
          } else {
            s.x += r;
          }
        }
      }
    }
    if (dead) {
      traj.records.push_back({traj.lifetime, GraphPoint::cemetery()});
      break;
    }
    traj.records.push_back({tg, pos_of()});
  }
  return traj;
}

EstimatorResult estimate_resolvent(const MetricGraph& g, const WentzellData& w,
                                   const GraphPoint& start, const EdgeFunction& f,
                                   double lambda, const SimConfig& cfg) {
  return resolvent_estimate(g, w, start, f, lambda, -1, cfg);
}

EstimatorResult estimate_resolvent_absorbed(const MetricGraph& g,
                                            const WentzellData& w,
                                            const GraphPoint& start,
                                            const EdgeFunction& f, double lambda,
                                            int absorb_vertex, const SimConfig& cfg) {
  if (absorb_vertex < 0 || absorb_vertex >= g.num_vertices())
    throw Error(ErrorCode::InvalidArgument, "absorbing vertex out of range");
  return resolvent_estimate(g, w, start, f, lambda, absorb_vertex, cfg);
}

EstimatorResult estimate_hitting_laplace(const MetricGraph& g,
                                         const WentzellData& w,
                                         const GraphPoint& start, int target_vertex,
                                         double lambda, const SimConfig& cfg) {
  check_lambda(lambda);
  validate_sim_config(g, cfg);
  if (target_vertex < 0 || target_vertex >= g.num_vertices())
    throw Error(ErrorCode::InvalidArgument, "target vertex out of range");
  const MarchState init = start_state(g, start);
  const double horizon = cfg.horizon > 0.0 ? cfg.horizon : std::log(1e4) / lambda;
  return run_paths(cfg, [&](Rng& rng) {
    MarchState s = init;
    while (s.t <= horizon) {
      if (s.at_vertex) {
        if (s.vertex == target_vertex) return std::exp(-lambda * s.t);
        const VertexClass vc = w.classify(s.vertex);
        if (vc.kind != VertexKind::Instantaneous) return 0.0;  // stuck or dies
        const VertexExcursion exc = vertex_excursion(rng, g, w, s.vertex, cfg.eps);
        if (exc.killed) return 0.0;
        s.t += exc.elapsed;
        leave_vertex(g, s, exc, cfg.eps);
      } else {
        s.t += edge_to_vertex_step(rng, g, s);
      }
    }
    return 0.0;  // horizon truncation, < 1e-4 of the estimate by design
  });
}

EstimatorResult estimate_semigroup_value(const MetricGraph& g,
                                         const WentzellData& w,
                                         const GraphPoint& start,
                                         const EdgeFunction& f, double t,
                                         const SimConfig& cfg) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::InvalidArgument, "time must be nonnegative and finite");
  validate_sim_config(g, cfg);
  validate_function(g, f);
  const MarchState init = start_state(g, start);
  const double floor = 1e-12 * std::max(1.0, t);
  return run_paths(cfg, [&](Rng& rng) {
    MarchState s = init;
    while (true) {
      const double remaining = t - s.t;
      if (s.at_vertex) {
        const double fv = f.vertex_value(g, s.vertex);
        const VertexClass vc = w.classify(s.vertex);
        if (vc.kind == VertexKind::Trap) return fv;
        if (vc.kind == VertexKind::HoldingKilling)
          return fv * std::exp(-vc.beta * remaining);  // survival probability
        const VertexExcursion exc = vertex_excursion(rng, g, w, s.vertex, cfg.eps);
        if (exc.killed) {
          // Death strikes at s.t + elapsed; before that the path is pinned
          // at the vertex (mid-lag).
          return exc.elapsed >= remaining ? fv : 0.0;
        }
        if (exc.elapsed >= remaining) return fv;  // mid-lag or mid-climb
        s.t += exc.elapsed;
        leave_vertex(g, s, exc, cfg.eps);
      } else {
        if (remaining <= floor) return f.eval(s.edge, s.x);
        const double dlo = s.x;
        const double dhi = g.is_internal(s.edge) ? g.edge_length(s.edge) - s.x
                                                 : kInfiniteDistance;
        const double r = std::min({0.5 * std::sqrt(remaining), dlo, dhi});
        const TwoSidedExit ex = sample_two_sided_exit(rng, r, 2.0 * r);
        // A straddling step freezes at the center: the conditional law of the
        // position is symmetric about it, so the bias is O(r^2 f'').
        if (ex.time >= remaining) return f.eval(s.edge, s.x);
        s.t += ex.time;
        if (ex.side == 0) {
          if (r == dlo) {
            s.at_vertex = true;
            s.vertex = g.edge_from(s.edge);
            s.edge = -1;
          } else {
            s.x -= r;
          }
        } else {
          if (r == dhi) {
            s.at_vertex = true;
            s.vertex = g.edge_to(s.edge);
            s.edge = -1;
          } else {
            s.x += r;
          }
        }
      }
    }
  });
}

}  // namespace graphbm
