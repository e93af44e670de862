#pragma once

#include <cstdint>
#include <vector>

#include "vibit/ingest.hpp"

namespace vibit {

/// Desk-scale synthetic match: players random-walk on the pitch at a
/// baseline step size and scramble hard around burst times; goal frames stay
/// fixed. Deterministic under the seed.
struct SyntheticSpec {
  double duration_s = 5400.0;
  int roster_nodes = 24;  // includes 2 goal frames when >= 4
  double rate_hz = 10.0;
  std::vector<double> burst_times;  // seconds
  double burst_intensity = 10.0;    // step multiplier while a burst is active
  double burst_duration_s = 6.0;
  double baseline_step_m = 0.18;  // random-walk step sigma per tick
  double decay_slope = 0.0;       // fraction of intensity lost by match end, [0, 1)
  std::uint64_t seed = 1;
};

/// Generates positions, clusters every tick, and tags one corner event per
/// distinct burst minute.
SampleStream generate_match(const SyntheticSpec& spec);

/// Corner-style burst pattern: three scrambles inside each tagged minute.
std::vector<double> corner_burst_pattern(const std::vector<int>& minutes);

}  // namespace vibit
