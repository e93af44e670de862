#include "vibit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace vibit {

namespace {

constexpr double kPitchX = 105.0;
constexpr double kPitchY = 68.0;

double reflect(double v, double lo, double hi) {
  while (v < lo || v > hi) {
    if (v < lo) v = 2 * lo - v;
    if (v > hi) v = 2 * hi - v;
  }
  return v;
}

}  // namespace

std::vector<double> corner_burst_pattern(const std::vector<int>& minutes) {
  std::vector<double> bursts;
  bursts.reserve(minutes.size() * 3);
  for (int m : minutes) {
    bursts.push_back(m * 60.0 + 6.0);
    bursts.push_back(m * 60.0 + 22.0);
    bursts.push_back(m * 60.0 + 38.0);
  }
  std::sort(bursts.begin(), bursts.end());
  return bursts;
}

SampleStream generate_match(const SyntheticSpec& spec) {
  if (!(spec.duration_s > 0)) throw std::invalid_argument("generate_match: duration must be positive");
  if (spec.roster_nodes < 2) throw std::invalid_argument("generate_match: need at least 2 nodes");
  if (!(spec.rate_hz > 0)) throw std::invalid_argument("generate_match: rate must be positive");
  if (spec.baseline_step_m < 0 || spec.burst_intensity < 0)
    throw std::invalid_argument("generate_match: rates must be non-negative");
  if (spec.decay_slope < 0 || spec.decay_slope >= 1)
    throw std::invalid_argument("generate_match: decay slope must be in [0, 1)");
  for (double b : spec.burst_times)
    if (b < 0 || b >= spec.duration_s)
      throw std::invalid_argument("generate_match: burst time outside the match duration");

  const int goal_frames = spec.roster_nodes >= 4 ? 2 : 0;
  const int players = spec.roster_nodes - goal_frames;
  const int home_players = (players + 1) / 2;

  std::vector<NodeInfo> infos;
  infos.reserve(spec.roster_nodes);
  for (int i = 0; i < players; ++i)
    infos.push_back({i, Role::Player, i < home_players ? Team::Home : Team::Visitor});
  if (goal_frames == 2) {
    infos.push_back({players, Role::GoalFrame, Team::Home});
    infos.push_back({players + 1, Role::GoalFrame, Team::Visitor});
  }
  auto roster = std::make_shared<Roster>(infos);

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> ux(10.0, kPitchX - 10.0);
  std::uniform_real_distribution<double> uy(8.0, kPitchY - 8.0);
  std::normal_distribution<double> step(0.0, 1.0);

  std::vector<double> px(spec.roster_nodes), py(spec.roster_nodes);
  for (int i = 0; i < players; ++i) {
    px[i] = ux(rng);
    py[i] = uy(rng);
  }
  if (goal_frames == 2) {
    px[players] = 0.5;
    py[players] = kPitchY / 2;
    px[players + 1] = kPitchX - 0.5;
    py[players + 1] = kPitchY / 2;
  }

  std::vector<double> bursts = spec.burst_times;
  std::sort(bursts.begin(), bursts.end());
  auto in_burst = [&](double t) {
    auto it = std::upper_bound(bursts.begin(), bursts.end(), t);
    return it != bursts.begin() && t < *(it - 1) + spec.burst_duration_s;
  };

  SampleStream stream;
  stream.rate_hz = spec.rate_hz;
  const auto ticks = static_cast<std::int64_t>(spec.duration_s * spec.rate_hz);
  stream.samples.reserve(ticks + 1);

  for (std::int64_t k = 0; k <= ticks; ++k) {
    const double t = static_cast<double>(k) / spec.rate_hz;
    if (k > 0) {
      const double fade = 1.0 - spec.decay_slope * (t / spec.duration_s);
      const double sigma =
          spec.baseline_step_m * fade * (in_burst(t) ? spec.burst_intensity : 1.0);
      for (int i = 0; i < players; ++i) {
        px[i] = reflect(px[i] + sigma * step(rng), 0.0, kPitchX);
        py[i] = reflect(py[i] + sigma * step(rng), 0.0, kPitchY);
      }
    }
    std::vector<PositionSample> pts;
    pts.reserve(spec.roster_nodes);
    for (int i = 0; i < spec.roster_nodes; ++i) pts.push_back({t, i, px[i], py[i]});

    StreamSample sample;
    sample.t = t;
    sample.clustering = cluster_positions(pts);
    sample.roster = roster;
    stream.samples.push_back(std::move(sample));
  }

  std::set<int> burst_minutes;
  for (double b : bursts) burst_minutes.insert(static_cast<int>(b / 60.0));
  for (int m : burst_minutes) stream.events.push_back({m, EventKind::Corner, std::nullopt});
  return stream;
}

}  // namespace vibit
