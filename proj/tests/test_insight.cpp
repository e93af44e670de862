#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include <json.hpp>

#include "oracles.hpp"
#include "test_util.hpp"
#include "vibit/insight.hpp"

using namespace vibit;
using testutil::clustering_over;

namespace {

SampleStream stream_of(std::vector<Clustering> clusterings, double rate_hz = 10.0) {
  SampleStream s;
  s.rate_hz = rate_hz;
  std::shared_ptr<const Roster> roster;
  std::vector<int> prev_ids;
  for (std::size_t i = 0; i < clusterings.size(); ++i) {
    StreamSample sample;
    sample.t = static_cast<double>(i) / rate_hz;
    auto ids = clusterings[i].roster();
    sample.roster_boundary = !prev_ids.empty() && ids != prev_ids;
    if (!roster || sample.roster_boundary) {
      std::vector<NodeInfo> infos;
      for (int id : ids)
        infos.push_back({id, Role::Player, id % 2 ? Team::Visitor : Team::Home});
      roster = std::make_shared<Roster>(infos);
    }
    sample.roster = roster;
    sample.clustering = std::move(clusterings[i]);
    prev_ids = ids;
    s.samples.push_back(std::move(sample));
  }
  return s;
}

std::vector<Peak> peaks_at_minutes(std::initializer_list<double> minutes) {
  std::vector<Peak> out;
  for (double m : minutes) out.push_back({m * 60.0, 1.0});
  return out;
}

}  // namespace

TEST_CASE("correlate_events counts recognized corners") {
  std::vector<MatchEvent> events{{10, EventKind::Corner, Team::Home},
                                 {50, EventKind::Corner, Team::Visitor}};
  auto report =
      correlate_events(peaks_at_minutes({10.2, 30.0}), events, EventKind::Corner, 30.0, 5400.0);
  CHECK(report.defined);
  CHECK(report.events_total == 2);
  CHECK(report.events_recognized == 1);  // the minute-10 peak, not minute 30
  CHECK(report.p_peak_given_event == doctest::Approx(0.5));
}

TEST_CASE("corners exactly at every peak give probability 1") {
  std::vector<MatchEvent> events{{10, EventKind::Corner, {}}, {30, EventKind::Corner, {}}};
  auto report =
      correlate_events(peaks_at_minutes({10.0, 30.0}), events, EventKind::Corner, 30.0, 5400.0);
  CHECK(report.p_peak_given_event == doctest::Approx(1.0));
}

TEST_CASE("no peaks means zero recognition and zero coverage") {
  std::vector<MatchEvent> events{{10, EventKind::Corner, {}}};
  auto report = correlate_events({}, events, EventKind::Corner, 30.0, 5400.0);
  CHECK(report.defined);
  CHECK(report.p_peak_given_event == 0.0);
  CHECK(report.p_peak_random == 0.0);
}

TEST_CASE("no events of the kind is flagged as undefined") {
  std::vector<MatchEvent> events{{10, EventKind::Goal, {}}};
  auto report =
      correlate_events(peaks_at_minutes({10.0}), events, EventKind::Corner, 30.0, 5400.0);
  CHECK_FALSE(report.defined);
  CHECK(report.events_total == 0);
}

TEST_CASE("enlarging the window never lowers the recognition probability") {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(0.0, 90.0);
  std::vector<MatchEvent> events;
  for (int i = 0; i < 12; ++i) events.push_back({static_cast<int>(u(rng)), EventKind::Corner, {}});
  std::vector<Peak> peaks;
  for (int i = 0; i < 20; ++i) peaks.push_back({u(rng) * 60.0, 1.0});

  double prev = -1.0;
  for (double w : {5.0, 15.0, 30.0, 60.0, 120.0}) {
    auto r = correlate_events(peaks, events, EventKind::Corner, w, 5400.0);
    CHECK(r.p_peak_given_event >= prev);
    prev = r.p_peak_given_event;
  }
}

TEST_CASE("coverage merges overlapping peak neighbourhoods") {
  // two peaks 10 s apart: their ±60 s neighbourhoods overlap
  std::vector<Peak> peaks{{1000.0, 1.0}, {1010.0, 1.0}};
  std::vector<MatchEvent> events{{1, EventKind::Corner, {}}};
  auto r = correlate_events(peaks, events, EventKind::Corner, 30.0, 5400.0);
  CHECK(r.p_peak_random == doctest::Approx(130.0 / 5400.0));
}

TEST_CASE("mine_transitions is empty for a static stream") {
  std::vector<Clustering> cs(20, clustering_over(4, {{0, 1}, {2, 3}}));
  CHECK(mine_transitions(stream_of(std::move(cs))).empty());
}

TEST_CASE("alternating stream accumulates each flow once per switch") {
  auto a = clustering_over(4, {{0, 1}, {2, 3}});
  auto b = clustering_over(4, {{0, 2}, {1, 3}});
  std::vector<Clustering> cs;
  for (int i = 0; i < 9; ++i) cs.push_back(i % 2 ? b : a);
  auto stream = stream_of(std::move(cs));
  auto transitions = mine_transitions(stream);

  // every a-cluster intersects every b-cluster in one node: 8 distinct flows
  CHECK(transitions.size() == 8);
  double mined_total = 0.0;
  for (const auto& tr : transitions) {
    CHECK(tr.occurrences.size() == 4);
    mined_total += tr.accumulated_vi;
    NodeSet inter;
    std::set_intersection(tr.source.begin(), tr.source.end(), tr.dest.begin(), tr.dest.end(),
                          std::back_inserter(inter));
    CHECK_FALSE(inter.empty());
    CHECK(tr.source != tr.dest);
  }
  // 8 transitions at VI 2.0 each
  CHECK(mined_total == doctest::Approx(8 * 2.0).epsilon(1e-9));
}

TEST_CASE("mined VI equals the series total VI cell by cell") {
  std::mt19937_64 rng(79);
  std::vector<Clustering> cs;
  for (int i = 0; i < 150; ++i)
    cs.push_back(clustering_over(10, oracle::random_partition(10, rng)));
  auto stream = stream_of(std::move(cs));
  auto transitions = mine_transitions(stream);

  double mined = 0.0;
  for (const auto& tr : transitions) mined += tr.accumulated_vi;
  double total = 0.0;
  for (std::size_t i = 1; i < stream.samples.size(); ++i)
    total += vi(stream.samples[i - 1].clustering, stream.samples[i].clustering);
  CHECK(std::abs(mined - total) < 1e-9);
}

TEST_CASE("appendix transition mining includes the 4-simplex flow") {
  auto stream = stream_of({testutil::fig7_source(), testutil::fig7_dest()}, 1.0 / 0.9);
  auto transitions = mine_transitions(stream);
  bool found = false;
  for (const auto& tr : transitions) {
    if (tr.source == NodeSet{18, 19, 20, 21} && tr.dest == NodeSet{9, 10, 11, 21}) {
      found = true;
      CHECK(tr.accumulated_vi == doctest::Approx(0.166667).epsilon(1e-4));
      REQUIRE(tr.per_player_vi.size() == 1);  // only node 21 flows
      CHECK(tr.per_player_vi[0].first == 21);
    }
  }
  CHECK(found);
}

TEST_CASE("ranking is by accumulated VI descending") {
  std::mt19937_64 rng(83);
  std::vector<Clustering> cs;
  for (int i = 0; i < 60; ++i)
    cs.push_back(clustering_over(8, oracle::random_partition(8, rng)));
  auto transitions = mine_transitions(stream_of(std::move(cs)), 10);
  CHECK(transitions.size() <= 10);
  for (std::size_t i = 1; i < transitions.size(); ++i)
    CHECK(transitions[i - 1].accumulated_vi >= transitions[i].accumulated_vi);
}

TEST_CASE("player profiles on the crossed 4-node transition") {
  auto a = clustering_over(4, {{0, 1}, {2, 3}});
  auto b = clustering_over(4, {{0, 2}, {1, 3}});
  auto stream = stream_of({a, b});
  for (int node = 0; node < 4; ++node) {
    auto p = player_profile(stream, node);
    CHECK(p.total == doctest::Approx(0.5).epsilon(1e-9));             // 2.0 / 4
    CHECK(p.match_average_per_player == doctest::Approx(0.5).epsilon(1e-9));
    REQUIRE(p.series.size() == 1);
    CHECK(p.series[0].second == doctest::Approx(0.5 / 0.1).epsilon(1e-9));
  }
  CHECK_THROWS_AS(player_profile(stream, 99), std::invalid_argument);
}

TEST_CASE("static stream yields an all-zero profile") {
  std::vector<Clustering> cs(10, clustering_over(4, {{0, 1}, {2, 3}}));
  auto p = player_profile(stream_of(std::move(cs)), 2);
  CHECK(p.total == 0.0);
  for (auto& [t, rate] : p.series) CHECK(rate == 0.0);
  CHECK(p.top_transitions.empty());
}

TEST_CASE("a single moving node dominates the contributions") {
  // node 4 hops from the first cluster to the second; everyone else stays
  auto a = clustering_over(6, {{0, 1, 4}, {2, 3, 5}});
  auto b = clustering_over(6, {{0, 1}, {2, 3, 4, 5}});
  auto stream = stream_of({a, b});
  auto profiles = all_player_profiles(stream);
  REQUIRE(profiles.size() == 6);
  double mover = 0.0;
  for (const auto& p : profiles)
    if (p.node == 4) mover = p.total;
  for (const auto& p : profiles)
    if (p.node != 4) CHECK(p.total < mover);
}

TEST_CASE("profile totals partition the match VI") {
  std::mt19937_64 rng(89);
  std::vector<Clustering> cs;
  for (int i = 0; i < 100; ++i)
    cs.push_back(clustering_over(9, oracle::random_partition(9, rng)));
  auto stream = stream_of(std::move(cs));
  auto profiles = all_player_profiles(stream);
  double sum = 0.0;
  for (const auto& p : profiles) sum += p.total;
  double total = 0.0;
  for (std::size_t i = 1; i < stream.samples.size(); ++i)
    total += vi(stream.samples[i - 1].clustering, stream.samples[i].clustering);
  CHECK(std::abs(sum - total) < 1e-9);
}

TEST_CASE("transition chart data encodes angles and compositions") {
  auto a = clustering_over(4, {{0, 1}, {2, 3}});
  auto b = clustering_over(4, {{0, 2}, {1, 3}});
  // one switch halfway through a 100 s stream sampled at 0.1 Hz... use times directly
  SampleStream stream;
  stream.rate_hz = 10.0;
  std::vector<NodeInfo> infos;
  for (int id = 0; id < 4; ++id)
    infos.push_back({id, Role::Player, id % 2 ? Team::Visitor : Team::Home});
  auto roster = std::make_shared<Roster>(infos);
  stream.samples.push_back({0.0, a, roster, false});
  stream.samples.push_back({50.0, b, roster, false});
  stream.samples.push_back({100.0, b, roster, false});

  auto transitions = mine_transitions(stream);
  auto text = transition_chart_json(transitions, stream.span_seconds());
  auto doc = nlohmann::json::parse(text);
  REQUIRE(doc.is_array());
  REQUIRE(doc.size() == transitions.size());
  CHECK(doc[0]["occurrences"][0]["angle"] == doctest::Approx(M_PI));  // half time
  for (std::size_t i = 0; i < doc.size(); ++i) {
    CHECK(doc[i]["rank"] == static_cast<int>(i + 1));
    CHECK(doc[i]["area"].get<double>() ==
          doctest::Approx(transitions[i].accumulated_vi).epsilon(1e-12));
    CHECK(doc[i]["source"].contains("label"));
  }

  // labels list home players first: cluster {0,1} -> "0-1" (0 home, 1 visitor)
  bool saw_label = false;
  for (const auto& entry : doc) {
    if (entry["source"]["nodes"] == nlohmann::json::array({0, 1})) {
      CHECK(entry["source"]["label"] == "0-1");
      CHECK(entry["source"]["home_count"] == 1);
      CHECK(entry["source"]["visitor_count"] == 1);
      saw_label = true;
    }
  }
  CHECK(saw_label);
}
