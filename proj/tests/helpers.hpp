#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qdspin/dynamics.hpp"

namespace qdspin::testing {

inline std::mt19937_64 rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

inline double sample_std(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / double(v.size() - 1));
}

/// Trajectory with an exact hole-spin ratio at (and after) the probe time:
/// p_down = f * occupied, p_up = (1 - f) * occupied. Used to feed the
/// spectrum synthesizer a known ground truth.
inline Trajectory injected_trajectory(double fidelity, double probe_delay_ps,
                                      double occupied = 0.9) {
  SystemState start;
  start.time_ps = 0.0;
  start.p_empty = 0.0;
  start.x_plus = 1.0;

  SystemState at_probe;
  at_probe.time_ps = probe_delay_ps;
  at_probe.p_hole_down = fidelity * occupied;
  at_probe.p_hole_up = (1.0 - fidelity) * occupied;
  at_probe.p_empty = 1.0 - occupied;

  SystemState after = at_probe;
  after.time_ps = 2.0 * probe_delay_ps;

  return Trajectory({start, at_probe, after}, PumpSpec{});
}

}  // namespace qdspin::testing
