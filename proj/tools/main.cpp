// vibit — clustered-network dynamics via Variation of Information.
//
// Subcommands: analyze (full pipeline), cluster (positions -> stream),
// generate (synthetic match), oracle (heuristic vs exact formation minima),
// counts (clustering/formation space sizes).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vibit/analysis.hpp"
#include "vibit/formation.hpp"
#include "vibit/ingest.hpp"
#include "vibit/insight.hpp"
#include "vibit/metric.hpp"
#include "vibit/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("VIBIT_LOG");
    if (!env) return 1;
    const std::string s = env;
    if (s == "quiet") return 0;
    if (s == "debug") return 2;
    return 1;
  }();
  return level;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "vibit: " << msg << "\n";
}

void debug(const std::string& msg) {
  if (log_level() >= 2) std::cerr << "vibit[debug]: " << msg << "\n";
}

struct RunConfig {
  double rate_hz = 10.0;
  double ma_window = 4.0;
  double max_pivot_gap = 80.0;
  int peak_target = 24;
  double event_window = 30.0;
  std::string profile = "soccer";
  std::string event_kind = "corner";
  int top_transitions = 10;
  double spline_resolution = 1.0;
  std::uint64_t seed = 1;

  vibit::Profile profile_enum() const {
    return profile == "generic" ? vibit::Profile::Generic : vibit::Profile::Soccer;
  }
};

void add_config_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--rate", cfg.rate_hz, "Sample rate in Hz")->check(CLI::PositiveNumber);
  cmd->add_option("--window", cfg.ma_window, "Moving-average window in seconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--pivot-max", cfg.max_pivot_gap, "Maximum envelope pivot gap in seconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--peaks", cfg.peak_target, "Target peak count (0 disables the search)");
  cmd->add_option("--event-window", cfg.event_window, "Event recognition window in seconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--profile", cfg.profile, "Clustering profile")
      ->check(CLI::IsMember({"soccer", "generic"}));
  cmd->add_option("--event-kind", cfg.event_kind, "Event kind to correlate with peaks");
  cmd->add_option("--top", cfg.top_transitions, "Transitions to keep in reports");
  cmd->add_option("--spline-resolution", cfg.spline_resolution,
                  "Sampling step for the envelope spline output, seconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cfg.seed, "Random seed for synthetic runs");
}

vibit::SampleStream load_stream(const std::string& positions_path, const std::string& stream_path,
                                const std::string& events_path, const RunConfig& cfg) {
  std::vector<vibit::MatchEvent> events;
  if (!events_path.empty()) {
    std::ifstream ev(events_path);
    if (!ev) throw std::runtime_error("cannot open events file " + events_path);
    events = vibit::parse_events_json(ev);
  }

  if (!positions_path.empty()) {
    std::ifstream in(positions_path);
    if (!in) throw std::runtime_error("cannot open positions file " + positions_path);
    auto table = vibit::parse_positions_csv(in);
    for (const auto& [from, to] : table.gaps) {
      std::ostringstream os;
      os << "positions feed gap from t=" << from << " to t=" << to;
      info(os.str());
    }
    vibit::IngestOptions opts;
    opts.rate_hz = cfg.rate_hz;
    opts.profile = cfg.profile_enum();
    return vibit::assemble_stream(table, std::move(events), opts);
  }

  std::ifstream in(stream_path);
  if (!in) throw std::runtime_error("cannot open stream file " + stream_path);
  auto stream = vibit::read_stream_json(in, cfg.profile_enum());
  if (!events.empty()) {
    info("replacing embedded events with " + events_path);
    stream.events = std::move(events);
  }
  return stream;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

json stats_json(const vibit::ComponentStats& s) {
  return json{{"mean", s.mean}, {"sigma", s.sigma}, {"cv", s.cv}, {"slope", s.slope}};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string kind_label(vibit::EventKind kind, const char* suffix) {
  std::string base = vibit::to_string(kind);
  if (base == "corner") base = "corners";
  else base += "_events";
  return base + "_" + suffix;
}

int cmd_analyze(const std::string& positions_path, const std::string& stream_path,
                const std::string& events_path, const std::string& out_dir,
                const RunConfig& cfg) {
  auto stream = load_stream(positions_path, stream_path, events_path, cfg);
  info("stream loaded: " + std::to_string(stream.samples.size()) + " samples, " +
       std::to_string(stream.events.size()) + " events");

  vibit::FormationViCache cache;
  const auto series = vibit::vi_series(stream, &cache);
  debug("formation memo holds " + std::to_string(cache.size()) + " pairs");

  const auto t = series.times();
  const auto totals = series.totals();
  const auto ma = vibit::moving_average(t, totals, cfg.ma_window);

  vibit::PeakSearchResult peaks;
  if (cfg.peak_target > 0) {
    peaks = vibit::find_peaks_with_target(t, ma, cfg.peak_target, cfg.max_pivot_gap);
    if (!peaks.target_met)
      info("peak target " + std::to_string(cfg.peak_target) + " not reachable; closest count " +
           std::to_string(peaks.achieved_count) + " at gap " + format_value(peaks.gap_used));
  } else {
    auto env = vibit::envelope(t, ma, cfg.max_pivot_gap);
    peaks.peaks = vibit::find_peaks(env);
    peaks.gap_used = cfg.max_pivot_gap;
    peaks.achieved_count = static_cast<int>(peaks.peaks.size());
    peaks.target_met = true;
  }

  const auto summary = vibit::summarize(stream, series);
  const auto dist = vibit::distribution(ma);
  const auto kind = vibit::event_kind_from_string(cfg.event_kind);
  const auto correlation = vibit::correlate_events(peaks.peaks, stream.events, kind,
                                                   cfg.event_window, stream.span_seconds());
  const auto transitions =
      vibit::mine_transitions(stream, static_cast<std::size_t>(cfg.top_transitions));
  const auto profiles =
      vibit::all_player_profiles(stream, static_cast<std::size_t>(cfg.top_transitions));

  fs::create_directories(fs::path(out_dir) / "players");

  {  // series.csv
    std::ostringstream os;
    os << "t,total_bps,vif_bps,vic_bps,home_bps,visitor_bps,ma_total_bps\n";
    for (std::size_t i = 0; i < series.points.size(); ++i) {
      const auto& p = series.points[i];
      os << format_value(p.t) << "," << format_value(p.total) << "," << format_value(p.vif)
         << "," << format_value(p.vic) << "," << format_value(p.home) << ","
         << format_value(p.visitor) << "," << format_value(ma[i]) << "\n";
    }
    write_file(fs::path(out_dir) / "series.csv", os.str());
  }

  {  // summary.json
    json doc{{"total", stats_json(summary.total)},
             {"home", stats_json(summary.home)},
             {"visitor", stats_json(summary.visitor)},
             {"compositional", stats_json(summary.compositional)},
             {"formation", stats_json(summary.formation)},
             {"null_transition_fraction", summary.null_transition_fraction},
             {"unique_clusterings", summary.unique_clusterings},
             {"unique_full_formations", summary.unique_full_formations},
             {"reappearance_rate", summary.reappearance_rate},
             {"points", series.points.size()},
             {"gaps", series.gap_times.size()}};
    write_file(fs::path(out_dir) / "summary.json", doc.dump(2) + "\n");
  }

  {  // peaks.json — pivots, sampled spline, peaks
    auto env = vibit::envelope(t, ma, peaks.gap_used);
    json pivots = json::array();
    for (const auto& p : env.pivots()) pivots.push_back({{"t", p.t}, {"value", p.value}});
    json spline = json::array();
    if (!t.empty()) {
      for (double ts = t.front(); ts <= t.back() + 1e-9; ts += cfg.spline_resolution)
        spline.push_back({{"t", ts}, {"value", env.value_at(ts)}});
    }
    json pk = json::array();
    for (const auto& p : peaks.peaks) pk.push_back({{"t", p.t}, {"value", p.value}});
    json doc{{"max_pivot_gap", cfg.max_pivot_gap},
             {"gap_used", peaks.gap_used},
             {"target_count", cfg.peak_target},
             {"target_met", peaks.target_met},
             {"pivots", std::move(pivots)},
             {"spline", std::move(spline)},
             {"peaks", std::move(pk)}};
    write_file(fs::path(out_dir) / "peaks.json", doc.dump(2) + "\n");
  }

  {  // correlation.json
    json doc{{"kind", vibit::to_string(kind)},
             {"window", correlation.window_seconds},
             {"peaks_used", correlation.peaks_used},
             {kind_label(kind, "total"), correlation.events_total},
             {kind_label(kind, "recognized"), correlation.events_recognized},
             {"p_peak_random", correlation.p_peak_random},
             {"defined", correlation.defined}};
    if (correlation.defined)
      doc["p_peak_given_" + vibit::to_string(kind)] = correlation.p_peak_given_event;
    else
      doc["p_peak_given_" + vibit::to_string(kind)] = nullptr;
    write_file(fs::path(out_dir) / "correlation.json", doc.dump(2) + "\n");
  }

  write_file(fs::path(out_dir) / "transitions.json",
             vibit::transition_chart_json(transitions, stream.span_seconds()) + "\n");

  {  // distribution.json
    json doc{{"bin_width", dist.bin_width},
             {"max_value", dist.max_value},
             {"counts", dist.counts},
             {"pdf", dist.pdf},
             {"cdf", dist.cdf}};
    write_file(fs::path(out_dir) / "distribution.json", doc.dump(2) + "\n");
  }

  for (const auto& profile : profiles) {  // players/<id>.json
    json series_json = json::array();
    for (const auto& [pt, rate] : profile.series) {
      if (rate != 0.0) series_json.push_back({pt, rate});
    }
    json tops = json::array();
    for (const auto& tr : profile.top_transitions) {
      double share = 0.0;
      for (const auto& [node, v] : tr.per_player_vi)
        if (node == profile.node) share = v;
      tops.push_back({{"accumulated_vi", tr.accumulated_vi},
                      {"player_vi", share},
                      {"occurrences", tr.occurrences.size()},
                      {"source", tr.source},
                      {"dest", tr.dest}});
    }
    json doc{{"node", profile.node},
             {"total_bits", profile.total},
             {"match_average_per_player_bits", profile.match_average_per_player},
             {"series", std::move(series_json)},
             {"top_transitions", std::move(tops)}};
    write_file(fs::path(out_dir) / "players" / (std::to_string(profile.node) + ".json"),
               doc.dump(2) + "\n");
  }

  std::cout << "analyze: " << series.points.size() << " transitions, "
            << peaks.achieved_count << " peaks (gap " << format_value(peaks.gap_used) << " s)";
  if (correlation.defined)
    std::cout << ", P(peak|" << vibit::to_string(kind)
              << ") = " << format_value(correlation.p_peak_given_event)
              << " vs random " << format_value(correlation.p_peak_random);
  std::cout << "\nanalyze: bundle written to " << out_dir << "\n";
  return 0;
}

int cmd_cluster(const std::string& positions_path, const std::string& events_path,
                const std::string& out_path, const RunConfig& cfg) {
  auto stream = load_stream(positions_path, "", events_path, cfg);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  vibit::write_stream_json(out, stream);
  std::cout << "cluster: " << stream.samples.size() << " samples written to " << out_path << "\n";
  return 0;
}

int cmd_generate(const vibit::SyntheticSpec& spec, const std::vector<int>& corner_minutes,
                 const std::string& out_path) {
  vibit::SyntheticSpec final_spec = spec;
  if (!corner_minutes.empty()) {
    auto pattern = vibit::corner_burst_pattern(corner_minutes);
    final_spec.burst_times.insert(final_spec.burst_times.end(), pattern.begin(), pattern.end());
  }
  info("generating " + std::to_string(final_spec.duration_s) + " s at " +
       std::to_string(final_spec.rate_hz) + " Hz, seed " + std::to_string(final_spec.seed));
  auto stream = vibit::generate_match(final_spec);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  vibit::write_stream_json(out, stream);
  std::cout << "generate: " << stream.samples.size() << " samples, " << stream.events.size()
            << " events written to " << out_path << "\n";
  return 0;
}

int cmd_oracle(int n_max, int exact_limit) {
  if (n_max > exact_limit)
    throw std::runtime_error("oracle: n_max exceeds the exact enumeration limit of " +
                             std::to_string(exact_limit));
  std::vector<std::vector<int>> parts;
  for (int n = 2; n <= n_max; ++n) {
    // all integer partitions of n
    parts.clear();
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rem, int max_part) {
      if (rem == 0) {
        parts.push_back(cur);
        return;
      }
      for (int p = std::min(rem, max_part); p >= 1; --p) {
        cur.push_back(p);
        rec(rem - p, p);
        cur.pop_back();
      }
    };
    rec(n, n);

    int pairs = 0, mismatches = 0;
    double max_gap = 0.0, rel_sum = 0.0;
    int rel_count = 0;
    std::string worst;
    for (const auto& a : parts) {
      for (const auto& b : parts) {
        ++pairs;
        const auto exact = vibit::min_formation_vi_exact(vibit::Formation(a), vibit::Formation(b),
                                                         exact_limit);
        const auto heur = vibit::min_formation_vi_heuristic(vibit::Formation(a),
                                                            vibit::Formation(b));
        const double gap = heur.min_vi - exact.min_vi;
        if (gap > 1e-9) {
          ++mismatches;
          if (gap > max_gap) {
            max_gap = gap;
            worst = vibit::Formation(a).to_string() + " -> " + vibit::Formation(b).to_string();
          }
        }
        if (exact.min_vi > 1e-12) {
          rel_sum += gap / exact.min_vi;
          ++rel_count;
        }
      }
    }
    std::cout << "n=" << n << ": " << pairs << " formation pairs, max gap "
              << format_value(max_gap) << ", mean relative gap "
              << format_value(rel_count ? rel_sum / rel_count : 0.0);
    if (mismatches) std::cout << ", " << mismatches << " above exact (worst " << worst << ")";
    std::cout << "\n";
  }

  const auto counts = vibit::count_spaces(24);
  std::cout << "counts cross-check: partitions(24) = " << counts.partitions
            << ", no-singleton partitions(24) = " << counts.partitions_no_singletons << "\n";
  return 0;
}

int cmd_counts(int n, int min_part) {
  const auto c = vibit::count_spaces(n, min_part);
  json doc{{"n", n},
           {"min_part", min_part},
           {"partitions", c.partitions.str()},
           {"partitions_no_singletons", c.partitions_no_singletons.str()},
           {"bell", c.bell.str()},
           {"bell_no_singletons", c.bell_no_singletons.str()}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clustered-network dynamics via Variation of Information"};
  app.require_subcommand(1);

  RunConfig cfg;

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Full pipeline: ingest, metrics, peaks, reports");
  std::string positions_path, stream_path, events_path, out_dir = "out";
  auto* pos_opt = analyze->add_option("--positions", positions_path, "Positions CSV");
  analyze->add_option("--stream", stream_path, "Pre-clustered stream JSON")->excludes(pos_opt);
  analyze->add_option("--events", events_path, "Events JSON");
  analyze->add_option("--out", out_dir, "Output bundle directory");
  add_config_flags(analyze, cfg);

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Positions CSV to stream JSON");
  std::string cl_positions, cl_events, cl_out = "stream.json";
  cluster->add_option("--positions", cl_positions, "Positions CSV")->required();
  cluster->add_option("--events", cl_events, "Events JSON");
  cluster->add_option("--out", cl_out, "Output stream path");
  RunConfig cl_cfg;
  add_config_flags(cluster, cl_cfg);

  // generate
  auto* generate = app.add_subcommand("generate", "Synthetic match stream");
  vibit::SyntheticSpec spec;
  std::vector<int> corner_minutes;
  std::string gen_out = "stream.json";
  generate->add_option("--duration", spec.duration_s, "Match length in seconds");
  generate->add_option("--nodes", spec.roster_nodes, "Roster size (includes 2 goal frames)");
  generate->add_option("--rate", spec.rate_hz, "Sample rate in Hz");
  generate->add_option("--corner-minutes", corner_minutes,
                       "Minutes that get corner-style burst patterns");
  generate->add_option("--burst-times", spec.burst_times, "Raw burst start times in seconds");
  generate->add_option("--burst-intensity", spec.burst_intensity, "Step multiplier during bursts");
  generate->add_option("--burst-duration", spec.burst_duration_s, "Burst length in seconds");
  generate->add_option("--baseline-step", spec.baseline_step_m, "Baseline step sigma in metres");
  generate->add_option("--decay", spec.decay_slope, "Intensity decay over the match, [0,1)");
  generate->add_option("--seed", spec.seed, "Random seed");
  generate->add_option("--out", gen_out, "Output stream path");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Heuristic vs exact formation minima");
  int n_max = 6, exact_limit = vibit::kDefaultExactLimit;
  oracle->add_option("--nmax", n_max, "Largest node count to enumerate");
  oracle->add_option("--exact-limit", exact_limit, "Exact solver node limit");

  // counts
  auto* counts = app.add_subcommand("counts", "Clustering and formation space sizes");
  int count_n = 24, min_part = 1;
  counts->add_option("-n,--nodes", count_n, "Node count");
  counts->add_option("--min-part", min_part, "Smallest allowed formation part");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      if (positions_path.empty() && stream_path.empty())
        throw std::runtime_error("analyze: need --positions or --stream");
      return cmd_analyze(positions_path, stream_path, events_path, out_dir, cfg);
    }
    if (cluster->parsed()) return cmd_cluster(cl_positions, cl_events, cl_out, cl_cfg);
    if (generate->parsed()) return cmd_generate(spec, corner_minutes, gen_out);
    if (oracle->parsed()) return cmd_oracle(n_max, exact_limit);
    if (counts->parsed()) return cmd_counts(count_n, min_part);
  } catch (const std::exception& e) {
    std::cerr << "vibit: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
