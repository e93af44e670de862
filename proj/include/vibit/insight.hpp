#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vibit/analysis.hpp"
#include "vibit/ingest.hpp"

namespace vibit {

/// Event–peak correlation at one-minute commentary resolution: an event is
/// recognized when a peak falls inside its tagged minute expanded by
/// ±window. The baseline is the fraction of the timeline covered by
/// peak ± (window + 30 s) neighbourhoods — the chance a uniformly placed
/// minute would be recognized.
struct CorrelationReport {
  EventKind kind = EventKind::Corner;
  double window_seconds = 30.0;
  int peaks_used = 0;
  int events_total = 0;
  int events_recognized = 0;
  double p_peak_given_event = 0.0;  // undefined (and flagged) when no events
  double p_peak_random = 0.0;
  bool defined = false;
};

CorrelationReport correlate_events(const std::vector<Peak>& peaks,
                                   const std::vector<MatchEvent>& events, EventKind kind,
                                   double window_seconds, double match_span_seconds);

/// An ordered pair of distinct, intersecting clusters observed at
/// consecutive samples, identified by exact node membership, with the VI it
/// accumulated over the match.
struct SimplexTransition {
  NodeSet source;
  NodeSet dest;
  std::vector<double> occurrences;  // transition times
  Bits accumulated_vi = 0.0;
  std::vector<std::pair<int, Bits>> per_player_vi;  // sorted by node id
  // team composition for chart encoding, split home / visitor
  NodeSet source_home, source_visitor;
  NodeSet dest_home, dest_visitor;
};

/// Every confusion cell with source != dest, accumulated by (source, dest)
/// node sets and ranked by accumulated VI. top_n == 0 returns all.
std::vector<SimplexTransition> mine_transitions(const SampleStream& stream,
                                                std::size_t top_n = 0);

/// One node's view of the match: per-transition contribution rates, the
/// match-average per player, and the transitions the node carried the most
/// VI through.
struct PlayerProfile {
  int node = 0;
  std::vector<std::pair<double, double>> series;  // (t, bps)
  Bits total = 0.0;
  Bits match_average_per_player = 0.0;
  std::vector<SimplexTransition> top_transitions;
};

PlayerProfile player_profile(const SampleStream& stream, int node, std::size_t top_n = 10);

/// All profiles in one pass over the stream (cheaper than calling
/// player_profile per node).
std::vector<PlayerProfile> all_player_profiles(const SampleStream& stream,
                                               std::size_t top_n = 10);

/// Plot-ready JSON for the circular transition charts: occurrence angles
/// (full match = full circle), VI-proportional areas, compositions and
/// home-first player labels.
std::string transition_chart_json(const std::vector<SimplexTransition>& transitions,
                                  double match_span_seconds);

}  // namespace vibit
