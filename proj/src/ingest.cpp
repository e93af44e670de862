#include "vibit/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace vibit {

using nlohmann::json;

EventKind event_kind_from_string(const std::string& s) {
  if (s == "corner") return EventKind::Corner;
  if (s == "goal") return EventKind::Goal;
  if (s == "substitution") return EventKind::Substitution;
  if (s == "red_card") return EventKind::RedCard;
  if (s == "other") return EventKind::Other;
  throw std::runtime_error("unknown event kind \"" + s + "\"");
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::Corner: return "corner";
    case EventKind::Goal: return "goal";
    case EventKind::Substitution: return "substitution";
    case EventKind::RedCard: return "red_card";
    case EventKind::Other: return "other";
  }
  return "other";
}

Clustering cluster_positions(const std::vector<PositionSample>& positions) {
  const std::size_t m = positions.size();
  if (m < 2) throw std::invalid_argument("cluster_positions: need at least 2 nodes");

  std::vector<PositionSample> pts = positions;
  std::sort(pts.begin(), pts.end(),
            [](const PositionSample& a, const PositionSample& b) { return a.node < b.node; });
  for (std::size_t i = 0; i < m; ++i) {
    if (!std::isfinite(pts[i].x) || !std::isfinite(pts[i].y))
      throw std::invalid_argument("cluster_positions: non-finite coordinates for node " +
                                  std::to_string(pts[i].node));
    if (i + 1 < m && pts[i].node == pts[i + 1].node)
      throw std::invalid_argument("cluster_positions: duplicate node " +
                                  std::to_string(pts[i].node) + " at one sample time");
  }

  // nearest neighbour per node, ties toward the lower node id
  std::vector<std::size_t> nn(m);
  for (std::size_t i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = i;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const double dx = pts[i].x - pts[j].x;
      const double dy = pts[i].y - pts[j].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best || (d2 == best && pts[j].node < pts[arg].node)) {
        best = d2;
        arg = j;
      }
    }
    nn[i] = arg;
  }

  // connected components of the undirected closure
  std::vector<std::size_t> parent(m);
  for (std::size_t i = 0; i < m; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t a = find(i), b = find(nn[i]);
    if (a != b) parent[a] = b;
  }

  std::map<std::size_t, NodeSet> components;
  NodeSet roster;
  roster.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    components[find(i)].push_back(pts[i].node);
    roster.push_back(pts[i].node);
  }
  std::vector<NodeSet> clusters;
  clusters.reserve(components.size());
  for (auto& [root, nodes] : components) clusters.push_back(std::move(nodes));

  return Clustering::make(std::move(clusters), std::move(roster), Profile::Soccer);
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, int row, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("positions row " + std::to_string(row) + ": bad " + what + " \"" +
                             s + "\"");
  }
}

int parse_int(const std::string& s, int row, const char* what) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("positions row " + std::to_string(row) + ": bad " + what + " \"" +
                             s + "\"");
  }
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

PositionTable parse_positions_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("positions: empty input");
  if (strip_cr(line) != "t,node,team,role,x,y")
    throw std::runtime_error("positions: expected header t,node,team,role,x,y");

  PositionTable table;
  std::map<int, NodeInfo> nodes;
  std::map<long long, std::vector<PositionSample>> buckets;
  long long last_tick = std::numeric_limits<long long>::min();
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto f = split_csv_row(line);
    if (f.size() != 6)
      throw std::runtime_error("positions row " + std::to_string(row) + ": expected 6 fields, got " +
                               std::to_string(f.size()));
    PositionSample s;
    s.t = parse_double(f[0], row, "t");
    s.node = parse_int(f[1], row, "node");
    if (s.node < 0)
      throw std::runtime_error("positions row " + std::to_string(row) + ": negative node id");
    Team team;
    if (f[2] == "H") team = Team::Home;
    else if (f[2] == "V") team = Team::Visitor;
    else throw std::runtime_error("positions row " + std::to_string(row) + ": team must be H or V");
    Role role;
    if (f[3] == "P") role = Role::Player;
    else if (f[3] == "G") role = Role::GoalFrame;
    else throw std::runtime_error("positions row " + std::to_string(row) + ": role must be P or G");
    s.x = parse_double(f[4], row, "x");
    s.y = parse_double(f[5], row, "y");
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.t))
      throw std::runtime_error("positions row " + std::to_string(row) + ": non-finite value");

    const long long tick = std::llround(s.t * 10.0);
    if (tick < last_tick)
      throw std::runtime_error("positions row " + std::to_string(row) +
                               ": timestamp goes backwards");
    last_tick = std::max(last_tick, tick);

    auto it = nodes.find(s.node);
    if (it == nodes.end()) {
      nodes[s.node] = NodeInfo{s.node, role, team};
    } else if (it->second.team != team || it->second.role != role) {
      throw std::runtime_error("positions row " + std::to_string(row) + ": node " +
                               std::to_string(s.node) + " changes team or role");
    }
    auto& bucket = buckets[tick];
    for (const auto& existing : bucket)
      if (existing.node == s.node)
        throw std::runtime_error("positions row " + std::to_string(row) + ": duplicate node " +
                                 std::to_string(s.node) + " at t=" + f[0]);
    bucket.push_back(s);
  }

  table.nodes.reserve(nodes.size());
  for (auto& [id, info] : nodes) table.nodes.push_back(info);

  long long prev_tick = std::numeric_limits<long long>::min();
  for (auto& [tick, entries] : buckets) {
    std::sort(entries.begin(), entries.end(),
              [](const PositionSample& a, const PositionSample& b) { return a.node < b.node; });
    if (prev_tick != std::numeric_limits<long long>::min() && tick != prev_tick + 1)
      table.gaps.emplace_back((prev_tick + 1) / 10.0, (tick - 1) / 10.0);
    table.buckets.push_back({tick / 10.0, std::move(entries)});
    prev_tick = tick;
  }
  return table;
}

namespace {

std::vector<MatchEvent> events_from_json(const json& doc) {
  if (!doc.is_array()) throw std::runtime_error("events: expected a JSON array");
  std::vector<MatchEvent> out;
  for (const auto& e : doc) {
    MatchEvent ev;
    ev.minute = e.at("minute").get<int>();
    if (ev.minute < 0) throw std::runtime_error("events: negative minute");
    ev.kind = event_kind_from_string(e.at("kind").get<std::string>());
    if (e.contains("team") && !e["team"].is_null()) {
      const std::string t = e["team"].get<std::string>();
      if (t == "H") ev.team = Team::Home;
      else if (t == "V") ev.team = Team::Visitor;
      else throw std::runtime_error("events: team must be H, V or null");
    }
    out.push_back(ev);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const MatchEvent& a, const MatchEvent& b) { return a.minute < b.minute; });
  return out;
}

}  // namespace

std::vector<MatchEvent> parse_events_json(std::istream& in) {
  return events_from_json(json::parse(in));
}

namespace {

json events_to_json(const std::vector<MatchEvent>& events) {
  json arr = json::array();
  for (const auto& e : events) {
    json j{{"minute", e.minute}, {"kind", to_string(e.kind)}};
    if (e.team) j["team"] = (*e.team == Team::Home) ? "H" : "V";
    else j["team"] = nullptr;
    arr.push_back(std::move(j));
  }
  return arr;
}

// legal roster changes sit within a minute of a substitution or red card
bool roster_change_covered(double t, const std::vector<MatchEvent>& events) {
  for (const auto& e : events) {
    if (e.kind != EventKind::Substitution && e.kind != EventKind::RedCard) continue;
    const double lo = e.minute * 60.0 - 60.0;
    const double hi = (e.minute + 1) * 60.0 + 60.0;
    if (t >= lo && t < hi) return true;
  }
  return false;
}

}  // namespace

SampleStream assemble_stream(const PositionTable& table, std::vector<MatchEvent> events,
                             const IngestOptions& options) {
  SampleStream stream;
  stream.rate_hz = options.rate_hz;
  std::stable_sort(events.begin(), events.end(),
                   [](const MatchEvent& a, const MatchEvent& b) { return a.minute < b.minute; });
  stream.events = events;

  std::map<int, PositionSample> last_position;
  std::vector<int> prev_ids;
  std::shared_ptr<const Roster> current_roster;

  for (const auto& bucket : table.buckets) {
    std::vector<PositionSample> entries = bucket.entries;

    if (options.carry_forward_missing && !prev_ids.empty()) {
      for (int id : prev_ids) {
        const bool present = std::any_of(entries.begin(), entries.end(),
                                         [&](const PositionSample& p) { return p.node == id; });
        if (!present && !roster_change_covered(bucket.t, stream.events)) {
          auto it = last_position.find(id);
          if (it != last_position.end()) {
            PositionSample fill = it->second;
            fill.t = bucket.t;
            entries.push_back(fill);
          }
        }
      }
      std::sort(entries.begin(), entries.end(),
                [](const PositionSample& a, const PositionSample& b) { return a.node < b.node; });
    }

    if (entries.size() < 2)
      throw std::runtime_error("assemble_stream: bucket at t=" + std::to_string(bucket.t) +
                               " has fewer than 2 nodes");

    std::vector<int> ids;
    ids.reserve(entries.size());
    for (const auto& e : entries) ids.push_back(e.node);

    bool boundary = false;
    if (!prev_ids.empty() && ids != prev_ids) {
      if (!roster_change_covered(bucket.t, stream.events))
        throw std::runtime_error(
            "assemble_stream: roster changes at t=" + std::to_string(bucket.t) +
            " without a substitution or red-card event");
      boundary = true;
    }

    if (boundary || !current_roster) {
      std::vector<NodeInfo> infos;
      infos.reserve(ids.size());
      for (int id : ids) {
        auto it = std::lower_bound(table.nodes.begin(), table.nodes.end(), id,
                                   [](const NodeInfo& n, int v) { return n.id < v; });
        if (it == table.nodes.end() || it->id != id)
          throw std::runtime_error("assemble_stream: node " + std::to_string(id) +
                                   " missing from the attribute table");
        infos.push_back(*it);
      }
      current_roster = std::make_shared<Roster>(std::move(infos));
    }

    for (const auto& e : entries) last_position[e.node] = e;

    StreamSample sample;
    sample.t = bucket.t;
    sample.clustering = cluster_positions(entries);
    sample.roster = current_roster;
    sample.roster_boundary = boundary;
    prev_ids = std::move(ids);
    stream.samples.push_back(std::move(sample));
  }
  return stream;
}

namespace {

std::shared_ptr<const Roster> roster_from_nodes(const std::vector<int>& ids,
                                                const std::map<int, NodeInfo>& attrs) {
  std::vector<NodeInfo> infos;
  infos.reserve(ids.size());
  for (int id : ids) {
    auto it = attrs.find(id);
    if (it != attrs.end()) infos.push_back(it->second);
    else infos.push_back(NodeInfo{id, Role::Player, Team::Home});
  }
  return std::make_shared<Roster>(std::move(infos));
}

}  // namespace

SampleStream read_stream_json(std::istream& in, Profile profile) {
  json doc = json::parse(in);
  SampleStream stream;
  stream.rate_hz = doc.value("rate_hz", 10.0);
  if (!(stream.rate_hz > 0)) throw std::runtime_error("stream: rate_hz must be positive");

  std::map<int, NodeInfo> attrs;
  if (doc.contains("nodes")) {
    for (const auto& n : doc["nodes"]) {
      NodeInfo info;
      info.id = n.at("id").get<int>();
      const std::string team = n.value("team", "H");
      info.team = (team == "V") ? Team::Visitor : Team::Home;
      const std::string role = n.value("role", "P");
      info.role = (role == "G") ? Role::GoalFrame : Role::Player;
      attrs[info.id] = info;
    }
  }
  if (doc.contains("events")) stream.events = events_from_json(doc["events"]);

  double prev_t = -std::numeric_limits<double>::infinity();
  std::vector<int> prev_ids;
  std::shared_ptr<const Roster> roster;
  for (const auto& s : doc.at("samples")) {
    StreamSample sample;
    sample.t = s.at("t").get<double>();
    if (sample.t <= prev_t)
      throw std::runtime_error("stream: sample times must be strictly increasing (t=" +
                               std::to_string(sample.t) + ")");
    prev_t = sample.t;

    std::vector<NodeSet> clusters;
    NodeSet ids;
    for (const auto& cluster : s.at("clusters")) {
      NodeSet c;
      for (const auto& id : cluster) c.push_back(id.get<int>());
      ids.insert(ids.end(), c.begin(), c.end());
      clusters.push_back(std::move(c));
    }
    std::sort(ids.begin(), ids.end());
    sample.clustering = Clustering::make(std::move(clusters), ids, profile);
    sample.roster_boundary = !prev_ids.empty() && ids != prev_ids;
    if (!roster || sample.roster_boundary) roster = roster_from_nodes(ids, attrs);
    sample.roster = roster;
    prev_ids = std::move(ids);
    stream.samples.push_back(std::move(sample));
  }
  return stream;
}

void write_stream_json(std::ostream& out, const SampleStream& stream) {
  json doc;
  doc["rate_hz"] = stream.rate_hz;

  // union attribute table over all rosters
  std::map<int, NodeInfo> attrs;
  for (const auto& s : stream.samples)
    for (const auto& n : s.roster->nodes()) attrs[n.id] = n;
  json nodes = json::array();
  for (const auto& [id, info] : attrs)
    nodes.push_back({{"id", id},
                     {"team", info.team == Team::Home ? "H" : "V"},
                     {"role", info.role == Role::Player ? "P" : "G"}});
  doc["nodes"] = std::move(nodes);

  json samples = json::array();
  for (const auto& s : stream.samples) {
    json clusters = json::array();
    for (const auto& c : s.clustering.clusters()) clusters.push_back(c);
    samples.push_back({{"t", s.t}, {"clusters", std::move(clusters)}});
  }
  doc["samples"] = std::move(samples);
  doc["events"] = events_to_json(stream.events);
  out << doc.dump() << "\n";
}

std::string clustering_to_json(const Clustering& c) {
  json doc;
  doc["roster"] = c.roster();
  json clusters = json::array();
  for (const auto& cluster : c.clusters()) clusters.push_back(cluster);
  doc["clusters"] = std::move(clusters);
  return doc.dump();
}

Clustering clustering_from_json(const std::string& text, Profile profile) {
  json doc = json::parse(text);
  NodeSet roster = doc.at("roster").get<NodeSet>();
  std::vector<NodeSet> clusters;
  for (const auto& c : doc.at("clusters")) clusters.push_back(c.get<NodeSet>());
  return Clustering::make(std::move(clusters), std::move(roster), profile);
}

}  // namespace vibit
