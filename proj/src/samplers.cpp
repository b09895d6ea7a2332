// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#include "graphbm/samplers.hpp"

#include <cmath>

namespace graphbm {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Envelope crossover. At t* = 2/pi the two series decay at the same rate
// (term ratios both <= 3 e^{-2 pi} ~ 0.0056), so partial sums bracket the
// density after one or two terms on either branch.
constexpr double kCross = 2.0 / kPi;

// Reflection-series terms: a_j = (2j+1) e^{-((2j+1)^2 - 1)/(2t)}, relative to
// the leading factor sqrt(2/(pi t^3)) e^{-1/(2t)} which is the branch-1
// envelope. Keeping the envelope factored out avoids cancellation and lets
// the accept test run on the series sum alone.
double reflection_ratio_term(int j, double t) {
  const double m = 2.0 * j + 1.0;
  return m * std::exp(-(m * m - 1.0) / (2.0 * t));
}

// Spectral-series terms relative to the leading term (pi/2) e^{-pi^2 t/8}.
double spectral_ratio_term(int j, double t) {
  const double m = 2.0 * j + 1.0;
  return m * std::exp(-(m * m - 1.0) * kPi * kPi * t / 8.0);
}

}  // namespace

double sample_one_sided_fpt(Rng& rng, double d) {
  double z;
  do {
    z = rng.normal();
  } while (z == 0.0);
  return d * d / (z * z);
}

double sample_centered_exit_time(Rng& rng) {
  // Branch masses: w1 = integral of the reflection envelope over (0, t*]
  // (i.e. twice the one-sided FPT(1) mass below t*), w2 = integral of the
  // spectral envelope over (t*, inf).
  static const double kW1 = 2.0 * std::erfc(1.0 / std::sqrt(2.0 * kCross));
  static const double kW2 = (4.0 / kPi) * std::exp(-kPi * kPi * kCross / 8.0);
  static const double kTotal = kW1 + kW2;

  for (;;) {
    double t;
    bool lower_branch;
    if (rng.uniform() * kTotal < kW1) {
      // Propose from the one-sided FPT density restricted to (0, t*]:
      // t = 1/Z^2 conditioned on t <= t*.
      lower_branch = true;
      double z;
      do {
        z = rng.normal();
        t = 1.0 / (z * z);
      } while (t > kCross);
    } else {
      // Propose from the exponential tail of the leading spectral term.
      lower_branch = false;
      t = kCross + rng.exponential(kPi * kPi / 8.0);
    }

    // Accept with probability f(t)/envelope(t) via alternating partial sums.
    // Terms decrease strictly on their branch, so S_odd <= f/env <= S_even.
    const double v = rng.uniform();
    double s = 0.0;
    bool accepted = false;
    for (int j = 0;; ++j) {
      const double term =
          lower_branch ? reflection_ratio_term(j, t) : spectral_ratio_term(j, t);
      if (j % 2 == 0) {
        s += term;
        if (v >= s) break;  // above an upper bound: reject
      } else {
        s -= term;
        if (v <= s) {  // below a lower bound: accept
          accepted = true;
          break;
        }
      }
      if (term < 1e-17) {  // series exhausted; s is f/env to roundoff
        accepted = v <= s;
        break;
      }
    }
    if (accepted) return t;
  }
}

TwoSidedExit sample_two_sided_exit(Rng& rng, double x, double L) {
  double t = 0.0;
  for (;;) {
    const double r = (x < L - x) ? x : L - x;
    t += r * r * sample_centered_exit_time(rng);
    x += (rng.uniform() < 0.5) ? -r : r;
    if (x <= 0.0 || x <= 1e-14 * L) return {0, t};
    if (x >= L || L - x <= 1e-14 * L) return {1, t};
  }
}

double centered_exit_survival(double t) {
  if (t <= 0.0) return 1.0;
  if (t >= kCross) {
    // P(tau > t) = sum_j (-1)^j 4/((2j+1) pi) e^{-(2j+1)^2 pi^2 t/8}
    double s = 0.0;
    for (int j = 0; j < 64; ++j) {
      const double m = 2.0 * j + 1.0;
      const double term = (4.0 / (m * kPi)) * std::exp(-m * m * kPi * kPi * t / 8.0);
      s += (j % 2 == 0) ? term : -term;
      if (term < 1e-17) break;
    }
    return s;
  }
  // P(tau > t) = P(|B_s| < 1 for s <= t), image expansion:
  // = sum_{k in Z} (-1)^k [Phi((2k+1)/sqrt t) - Phi((2k-1)/sqrt t)].
  const double rt = std::sqrt(t);
  auto Phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  double s = 0.0;
  for (int k = -32; k <= 32; ++k) {
    const double term = Phi((2.0 * k + 1.0) / rt) - Phi((2.0 * k - 1.0) / rt);
    s += (((k % 2) + 2) % 2 == 0) ? term : -term;
  }
  return s;
}

}  // namespace graphbm
