#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vibit/core.hpp"

namespace vibit {

/// One tracked position at a 0.1 s tick.
struct PositionSample {
  double t = 0.0;  // seconds
  int node = 0;
  double x = 0.0, y = 0.0;  // metres in the pitch plane
};

enum class EventKind { Corner, Goal, Substitution, RedCard, Other };

EventKind event_kind_from_string(const std::string& s);  // throws on unknown kind
std::string to_string(EventKind k);

/// Tagged match event at one-minute commentary resolution.
struct MatchEvent {
  int minute = 0;
  EventKind kind = EventKind::Other;
  std::optional<Team> team;
};

/// Parsed, time-bucketed positions plus the node attribute table.
struct PositionTable {
  std::vector<NodeInfo> nodes;  // sorted by id
  struct Bucket {
    double t = 0.0;
    std::vector<PositionSample> entries;  // sorted by node id
  };
  std::vector<Bucket> buckets;                   // strictly increasing t
  std::vector<std::pair<double, double>> gaps;   // [from, to] stretches with no data
};

/// Nearest-neighbour clustering of one time bucket: each node points at its
/// closest node (Euclidean distance, ties toward the lower id) and clusters
/// are the connected components of the undirected closure. Every cluster has
/// at least 2 nodes by construction.
Clustering cluster_positions(const std::vector<PositionSample>& positions);

/// Reads `t,node,team,role,x,y` CSV. Throws std::runtime_error naming the
/// first offending row on malformed input or timestamp regressions.
PositionTable parse_positions_csv(std::istream& in);

/// Reads the events array: [{"minute":int,"kind":string,"team":"H"|"V"|null}].
std::vector<MatchEvent> parse_events_json(std::istream& in);

struct StreamSample {
  double t = 0.0;
  Clustering clustering;
  std::shared_ptr<const Roster> roster;
  bool roster_boundary = false;  // roster differs from the previous sample
};

/// Time-ordered clustering samples with events. Transitions across a roster
/// boundary carry no VI; downstream analysis records them as gaps.
struct SampleStream {
  double rate_hz = 10.0;
  std::vector<StreamSample> samples;
  std::vector<MatchEvent> events;

  double span_seconds() const {
    return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
  }
};

struct IngestOptions {
  double rate_hz = 10.0;
  Profile profile = Profile::Soccer;
  /// Fill tracking dropouts with the node's last seen position instead of
  /// failing. Nodes may still only appear or leave for good at
  /// substitution / red-card minutes.
  bool carry_forward_missing = false;
};

/// One clustering per bucket; roster changes are only legal within one
/// minute of a substitution or red-card event and mark a stream boundary.
SampleStream assemble_stream(const PositionTable& table, std::vector<MatchEvent> events,
                             const IngestOptions& options = {});

/// Stream JSON: {"rate_hz":..,"samples":[{"t":..,"clusters":[[ids]..]}..],
/// "events":[..],"nodes":[{"id","team","role"}..]}. The "nodes" attribute
/// table is optional on input; without it every node defaults to a home
/// player.
SampleStream read_stream_json(std::istream& in, Profile profile = Profile::Soccer);
void write_stream_json(std::ostream& out, const SampleStream& stream);

/// Canonical JSON form {"roster":[ids],"clusters":[[ids]..]} in canonical
/// order.
std::string clustering_to_json(const Clustering& c);
Clustering clustering_from_json(const std::string& text, Profile profile = Profile::Generic);

}  // namespace vibit
