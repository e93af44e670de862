#include "vibit/insight.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace vibit {

using nlohmann::json;

CorrelationReport correlate_events(const std::vector<Peak>& peaks,
                                   const std::vector<MatchEvent>& events, EventKind kind,
                                   double window_seconds, double match_span_seconds) {
  if (!(window_seconds > 0.0))
    throw std::invalid_argument("correlate_events: window must be positive");

  CorrelationReport r;
  r.kind = kind;
  r.window_seconds = window_seconds;
  r.peaks_used = static_cast<int>(peaks.size());

  for (const auto& e : events) {
    if (e.kind != kind) continue;
    ++r.events_total;
    const double lo = e.minute * 60.0 - window_seconds;
    const double hi = (e.minute + 1) * 60.0 + window_seconds;
    for (const auto& p : peaks) {
      if (p.t >= lo && p.t < hi) {
        ++r.events_recognized;
        break;
      }
    }
  }
  r.defined = r.events_total > 0;
  if (r.defined) r.p_peak_given_event = static_cast<double>(r.events_recognized) / r.events_total;

  // baseline: timeline coverage by peak neighbourhoods, ±(window + 30 s)
  // to account for the one-minute tag resolution
  if (match_span_seconds > 0.0 && !peaks.empty()) {
    const double half = window_seconds + 30.0;
    std::vector<std::pair<double, double>> iv;
    iv.reserve(peaks.size());
    for (const auto& p : peaks)
      iv.emplace_back(std::max(0.0, p.t - half), std::min(match_span_seconds, p.t + half));
    std::sort(iv.begin(), iv.end());
    double covered = 0.0, cur_lo = iv.front().first, cur_hi = iv.front().second;
    for (std::size_t i = 1; i < iv.size(); ++i) {
      if (iv[i].first <= cur_hi) {
        cur_hi = std::max(cur_hi, iv[i].second);
      } else {
        covered += cur_hi - cur_lo;
        cur_lo = iv[i].first;
        cur_hi = iv[i].second;
      }
    }
    covered += cur_hi - cur_lo;
    r.p_peak_random = covered / match_span_seconds;
  }
  return r;
}

namespace {

struct TransitionAccumulator {
  std::vector<double> occurrences;
  double vi_sum = 0.0;
  std::map<int, double> per_player;
  bool composition_set = false;
  NodeSet source_home, source_visitor, dest_home, dest_visitor;
};

using TransitionKey = std::pair<NodeSet, NodeSet>;

void split_by_team(const NodeSet& nodes, const Roster& roster, NodeSet& home, NodeSet& visitor) {
  for (int id : nodes) {
    if (roster.info(id).team == Team::Home) home.push_back(id);
    else visitor.push_back(id);
  }
}

std::vector<SimplexTransition> rank_transitions(std::map<TransitionKey, TransitionAccumulator>& acc,
                                                std::size_t top_n) {
  std::vector<SimplexTransition> out;
  out.reserve(acc.size());
  for (auto& [key, a] : acc) {
    SimplexTransition tr;
    tr.source = key.first;
    tr.dest = key.second;
    tr.occurrences = std::move(a.occurrences);
    tr.accumulated_vi = a.vi_sum;
    tr.per_player_vi.assign(a.per_player.begin(), a.per_player.end());
    tr.source_home = std::move(a.source_home);
    tr.source_visitor = std::move(a.source_visitor);
    tr.dest_home = std::move(a.dest_home);
    tr.dest_visitor = std::move(a.dest_visitor);
    out.push_back(std::move(tr));
  }
  std::sort(out.begin(), out.end(), [](const SimplexTransition& a, const SimplexTransition& b) {
    if (a.accumulated_vi != b.accumulated_vi) return a.accumulated_vi > b.accumulated_vi;
    if (a.source != b.source) return a.source < b.source;
    return a.dest < b.dest;
  });
  if (top_n > 0 && out.size() > top_n) out.resize(top_n);
  return out;
}

// Walks every consecutive same-roster pair and hands each non-identity,
// non-empty confusion cell to the sink.
template <typename CellSink>
void for_each_transition_cell(const SampleStream& stream, CellSink&& sink) {
  for (std::size_t s = 1; s < stream.samples.size(); ++s) {
    const auto& a = stream.samples[s - 1];
    const auto& b = stream.samples[s];
    if (b.roster_boundary) continue;
    const ConfusionMatrix m = confusion(a.clustering, b.clustering);
    const int n = m.total();
    const double dt = b.t - a.t;
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        const int count = m.at(i, j);
        if (count == 0) continue;
        // identical sets iff the full cluster flows into an equal-sized one
        if (count == m.row_sum(i) && count == m.col_sum(j)) continue;
        const double value = cell_vi(count, m.row_sum(i), m.col_sum(j), n);
        sink(a, b, i, j, count, value, dt);
      }
    }
  }
}

}  // namespace

std::vector<SimplexTransition> mine_transitions(const SampleStream& stream, std::size_t top_n) {
  std::map<TransitionKey, TransitionAccumulator> acc;
  for_each_transition_cell(
      stream, [&](const StreamSample& a, const StreamSample& b, int i, int j, int count,
                  double value, double /*dt*/) {
        const NodeSet& source = a.clustering.clusters()[i];
        const NodeSet& dest = b.clustering.clusters()[j];
        auto& slot = acc[{source, dest}];
        slot.occurrences.push_back(b.t);
        slot.vi_sum += value;
        NodeSet inter;
        std::set_intersection(source.begin(), source.end(), dest.begin(), dest.end(),
                              std::back_inserter(inter));
        for (int node : inter) slot.per_player[node] += value / count;
        if (!slot.composition_set) {
          split_by_team(source, *b.roster, slot.source_home, slot.source_visitor);
          split_by_team(dest, *b.roster, slot.dest_home, slot.dest_visitor);
          slot.composition_set = true;
        }
      });
  return rank_transitions(acc, top_n);
}

namespace {

// average share if every transition's VI were split evenly over the roster;
// node-independent, so computed once per stream
Bits match_average_per_player(const SampleStream& stream) {
  Bits avg = 0.0;
  for (std::size_t s = 1; s < stream.samples.size(); ++s) {
    const auto& a = stream.samples[s - 1];
    const auto& b = stream.samples[s];
    if (b.roster_boundary) continue;
    avg += vi(a.clustering, b.clustering) / a.clustering.node_count();
  }
  return avg;
}

PlayerProfile profile_for_node(const SampleStream& stream, int node,
                               const std::vector<SimplexTransition>& all_transitions,
                               std::size_t top_n, Bits match_average) {
  PlayerProfile p;
  p.node = node;
  p.match_average_per_player = match_average;

  for (std::size_t s = 1; s < stream.samples.size(); ++s) {
    const auto& a = stream.samples[s - 1];
    const auto& b = stream.samples[s];
    if (b.roster_boundary) continue;
    if (a.clustering.rank_of(node) < 0) continue;
    const double dt = b.t - a.t;
    const Bits share = node_contribution(a.clustering, b.clustering, node);
    p.series.emplace_back(b.t, share / dt);
    p.total += share;
  }

  std::vector<SimplexTransition> mine;
  for (const auto& tr : all_transitions) {
    auto it = std::lower_bound(tr.per_player_vi.begin(), tr.per_player_vi.end(), node,
                               [](const std::pair<int, Bits>& e, int v) { return e.first < v; });
    if (it != tr.per_player_vi.end() && it->first == node) mine.push_back(tr);
  }
  std::stable_sort(mine.begin(), mine.end(),
                   [&](const SimplexTransition& a, const SimplexTransition& b) {
                     auto share = [&](const SimplexTransition& tr) {
                       auto it = std::lower_bound(
                           tr.per_player_vi.begin(), tr.per_player_vi.end(), node,
                           [](const std::pair<int, Bits>& e, int v) { return e.first < v; });
                       return it->second;
                     };
                     return share(a) > share(b);
                   });
  if (top_n > 0 && mine.size() > top_n) mine.resize(top_n);
  p.top_transitions = std::move(mine);
  return p;
}

}  // namespace

PlayerProfile player_profile(const SampleStream& stream, int node, std::size_t top_n) {
  bool known = false;
  for (const auto& s : stream.samples)
    if (s.clustering.rank_of(node) >= 0) {
      known = true;
      break;
    }
  if (!known)
    throw std::invalid_argument("player_profile: node " + std::to_string(node) +
                                " never appears in the stream");
  return profile_for_node(stream, node, mine_transitions(stream), top_n,
                          match_average_per_player(stream));
}

std::vector<PlayerProfile> all_player_profiles(const SampleStream& stream, std::size_t top_n) {
  const auto transitions = mine_transitions(stream);
  const Bits average = match_average_per_player(stream);
  std::set<int> ids;
  for (const auto& s : stream.samples)
    for (int id : s.clustering.roster()) ids.insert(id);
  std::vector<PlayerProfile> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(profile_for_node(stream, id, transitions, top_n, average));
  return out;
}

namespace {

std::string side_label(const NodeSet& home, const NodeSet& visitor) {
  std::ostringstream os;
  for (std::size_t i = 0; i < home.size(); ++i) {
    if (i) os << ",";
    os << home[i];
  }
  os << "-";
  for (std::size_t i = 0; i < visitor.size(); ++i) {
    if (i) os << ",";
    os << visitor[i];
  }
  return os.str();
}

json side_json(const NodeSet& all, const NodeSet& home, const NodeSet& visitor) {
  return json{{"nodes", all},
              {"size", all.size()},
              {"home_count", home.size()},
              {"visitor_count", visitor.size()},
              {"label", side_label(home, visitor)}};
}

}  // namespace

std::string transition_chart_json(const std::vector<SimplexTransition>& transitions,
                                  double match_span_seconds) {
  json arr = json::array();
  int rank = 1;
  for (const auto& tr : transitions) {
    json occ = json::array();
    for (double t : tr.occurrences) {
      const double angle =
          match_span_seconds > 0.0 ? 2.0 * M_PI * t / match_span_seconds : 0.0;
      occ.push_back({{"t", t}, {"angle", angle}});
    }
    json per_player = json::array();
    for (const auto& [node, share] : tr.per_player_vi)
      per_player.push_back({{"node", node}, {"vi", share}});
    arr.push_back({{"rank", rank++},
                   {"accumulated_vi", tr.accumulated_vi},
                   {"area", tr.accumulated_vi},
                   {"occurrences", std::move(occ)},
                   {"source", side_json(tr.source, tr.source_home, tr.source_visitor)},
                   {"dest", side_json(tr.dest, tr.dest_home, tr.dest_visitor)},
                   {"per_player", std::move(per_player)}});
  }
  return arr.dump(2);
}

}  // namespace vibit
