// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "graphbm/rng.hpp"

namespace graphbm {

// Exact-in-law samplers for one-dimensional Brownian first-passage problems.
// These are the primitives the path simulator is built from; every one of
// them is exact (no time discretization), so the only bias in the engine
// comes from the vertex shell scheme and from integrand linearization.

// First passage time of standard Brownian motion to a level at distance d > 0.
// Uses H_d = d^2 / Z^2 with Z standard normal (reflection principle).
double sample_one_sided_fpt(Rng& rng, double d);

// Exit time of standard Brownian motion from (-1,1) started at 0.
// Alternating-series rejection sampler (Devroye's method) on the two dual
// series for the density:
//   reflection:  f(t) = sqrt(2/(pi t^3)) * sum_j (-1)^j (2j+1) e^{-(2j+1)^2/(2t)}
//   spectral:    f(t) = (pi/2) * sum_j (-1)^j (2j+1) e^{-(2j+1)^2 pi^2 t / 8}
// Envelope: first reflection term below t* = 2/pi, first spectral term above;
// total envelope mass ~ 1.0012, so nearly every proposal is accepted.
double sample_centered_exit_time(Rng& rng);

struct TwoSidedExit {
  int side;     // 0: exited at the lower endpoint, 1: at the upper endpoint
  double time;  // exit time
};

// Exit (side, time) of standard Brownian motion from (0, L) started at
// x in (0, L). Decomposed into a geometric number of centered excursions
// (interval [x-r, x+r] with r = min(x, L-x) touches the nearer boundary, so
// each step terminates with probability 1/2); exact in law for every x.
TwoSidedExit sample_two_sided_exit(Rng& rng, double x, double L);

// Probability that the canonical centered exit takes longer than t; used by
// tests and by the deadline stepping logic. Evaluated from whichever series
// converges faster at t.
double centered_exit_survival(double t);

}  // namespace graphbm
