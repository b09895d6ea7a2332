// Copyright 2026 the graphbm authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace graphbm {

// Deterministic random streams for the path simulator.
//
// Requirements that rule out <random>: identical output for identical
// (seed, path index) on every platform, and independent per-path streams so
// estimates do not depend on how paths are scheduled across threads. We use
// splitmix64 to expand (seed, stream id) into xoshiro256++ state; variates are
// generated by explicit transforms, never by library distributions.

inline uint64_t splitmix64_next(uint64_t& s) {
  uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  // Stream `stream` of the family identified by `seed`. Stream 0 is the
  // default; estimators use stream = path index + 1 so that the path streams
  // never collide with ad-hoc draws made from the base stream.
  explicit Rng(uint64_t seed, uint64_t stream = 0) {
    uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    for (auto& w : state_) w = splitmix64_next(s);
    // xoshiro state must not be all zero; splitmix64 guarantees that only if
    // we check.
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on (0,1): 53-bit mantissa, never returns 0 or 1.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Standard normal via Box-Muller; the spare value is cached per stream.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  // Exponential with the given mean (the shell scheme speaks in means).
  double exponential_mean(double mean) { return -std::log(uniform()) * mean; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace graphbm
