#pragma once

#include <cstdint>
#include <vector>

#include "vibit/formation.hpp"
#include "vibit/ingest.hpp"
#include "vibit/metric.hpp"

namespace vibit {

/// One transition's rates in bits per second, stamped at the later sample.
struct ViPoint {
  double t = 0.0;
  double dt = 0.0;
  double total = 0.0;
  double vif = 0.0;
  double vic = 0.0;
  double home = 0.0;
  double visitor = 0.0;
};

/// Per-transition VI rates for every consecutive same-roster pair.
struct ViSeries {
  std::vector<ViPoint> points;
  std::vector<double> gap_times;  // times of skipped roster-boundary transitions

  std::vector<double> times() const;
  std::vector<double> totals() const;
};

/// Builds the rate series. Transitions across a roster boundary are recorded
/// in gap_times instead of contributing a point. `cache` optionally shares
/// the formation-pair memo across calls.
ViSeries vi_series(const SampleStream& stream, FormationViCache* cache = nullptr);

/// Trailing mean over the window (t_i - window, t_i], emitted at every
/// sample time. Throws on non-positive window.
std::vector<double> moving_average(const std::vector<double>& t, const std::vector<double>& v,
                                   double window_seconds);

/// Cubic Hermite spline through selected local maxima of a series.
///
/// Pivot selection is greedy by descending value: a candidate is accepted
/// when it keeps a distance of at least max_pivot_gap * (1 - F(value)) from
/// every accepted pivot, F being the series' empirical CDF — so the spline
/// hugs the high-valued maxima and glides over quiet stretches. The first
/// and last samples anchor the ends. Tangents are monotone finite
/// differences (Fritsch–Butland), zero at non-monotone junctions and at the
/// ends; evaluation is clamped outside the pivot range.
class EnvelopeSpline {
 public:
  struct Pivot {
    double t = 0.0;
    double value = 0.0;
    double tangent = 0.0;
  };

  double value_at(double t) const;
  double derivative_at(double t) const;
  const std::vector<Pivot>& pivots() const { return pivots_; }
  double max_pivot_gap() const { return max_pivot_gap_; }

 private:
  friend EnvelopeSpline envelope(const std::vector<double>&, const std::vector<double>&, double);
  std::vector<Pivot> pivots_;
  double max_pivot_gap_ = 0.0;
};

EnvelopeSpline envelope(const std::vector<double>& t, const std::vector<double>& v,
                        double max_pivot_gap);

/// A stationary maximum of the envelope (derivative crosses zero downward).
struct Peak {
  double t = 0.0;
  double value = 0.0;
};

std::vector<Peak> find_peaks(const EnvelopeSpline& env);

/// Re-fits the envelope, bisecting the pivot gap until the peak count lands
/// in [band_lo, band_hi] (defaults: target-1 .. target+2, giving the 23..26
/// band for a target of 24). Never throws: when the target is unreachable
/// the closest achieved count is returned with target_met = false.
struct PeakSearchResult {
  std::vector<Peak> peaks;
  double gap_used = 0.0;
  int achieved_count = 0;
  bool target_met = false;
};

PeakSearchResult find_peaks_with_target(const std::vector<double>& t,
                                        const std::vector<double>& v, int target_count,
                                        double initial_gap, int band_lo = -1, int band_hi = -1);

/// Histogram PDF (density over bins of fixed width starting at 0) and
/// empirical CDF sampled at the bin edges.
struct Distribution {
  double bin_width = 0.05;
  double max_value = 0.0;
  std::vector<std::int64_t> counts;
  std::vector<double> pdf;  // density per bin; sums to 1 when multiplied by bin_width
  std::vector<double> cdf;  // at upper bin edges; last entry is 1
};

Distribution distribution(const std::vector<double>& values, double bin_width = 0.05);

/// Ordinary least-squares slope of value against time. Throws when all
/// times coincide or fewer than 2 points are given.
double trend(const std::vector<double>& t, const std::vector<double>& v);

struct ComponentStats {
  double mean = 0.0;
  double sigma = 0.0;
  double cv = 0.0;  // sigma / mean
  double slope = 0.0;
};

/// Match-level statistics in the shape of the per-match report table.
struct MatchSummary {
  ComponentStats total, home, visitor, compositional, formation;
  double null_transition_fraction = 0.0;
  std::int64_t unique_clusterings = 0;
  std::int64_t unique_full_formations = 0;  // over full-roster samples only
  double reappearance_rate = 0.0;           // excludes immediate repeats
};

MatchSummary summarize(const SampleStream& stream, const ViSeries& series);

}  // namespace vibit
