#include "vibit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace vibit {

std::vector<double> ViSeries::times() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.t);
  return out;
}

std::vector<double> ViSeries::totals() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.total);
  return out;
}

ViSeries vi_series(const SampleStream& stream, FormationViCache* cache) {
  if (stream.samples.size() < 2)
    throw std::invalid_argument("vi_series: need at least 2 samples");

  FormationViCache local;
  if (!cache) cache = &local;

  ViSeries series;
  series.points.reserve(stream.samples.size() - 1);
  for (std::size_t i = 1; i < stream.samples.size(); ++i) {
    const auto& a = stream.samples[i - 1];
    const auto& b = stream.samples[i];
    if (b.roster_boundary) {
      series.gap_times.push_back(b.t);
      continue;
    }
    const double dt = b.t - a.t;
    const Bits vif = vif_for_transition(a.clustering, b.clustering, cache);
    const ViBreakdown bd = breakdown(a.clustering, b.clustering, *b.roster, vif);
    ViPoint p;
    p.t = b.t;
    p.dt = dt;
    p.total = bd.total / dt;
    p.vif = bd.formation_part / dt;
    p.vic = bd.compositional_part / dt;
    p.home = bd.home / dt;
    p.visitor = bd.visitor / dt;
    series.points.push_back(p);
  }
  return series;
}

std::vector<double> moving_average(const std::vector<double>& t, const std::vector<double>& v,
                                   double window_seconds) {
  if (!(window_seconds > 0.0))
    throw std::invalid_argument("moving_average: window must be positive");
  if (t.size() != v.size())
    throw std::invalid_argument("moving_average: mismatched series lengths");

  std::vector<double> out(v.size());
  double sum = 0.0;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    sum += v[i];
    while (t[lo] <= t[i] - window_seconds) {
      sum -= v[lo];
      ++lo;
    }
    out[i] = sum / (i - lo + 1);
  }
  return out;
}

namespace {

// Hermite basis on s in [0,1]
inline double hermite(double v0, double m0, double v1, double m1, double h, double s) {
  const double s2 = s * s, s3 = s2 * s;
  return v0 * (2 * s3 - 3 * s2 + 1) + h * m0 * (s3 - 2 * s2 + s) + v1 * (-2 * s3 + 3 * s2) +
         h * m1 * (s3 - s2);
}

inline double hermite_deriv(double v0, double m0, double v1, double m1, double h, double s) {
  const double s2 = s * s;
  return (v0 * (6 * s2 - 6 * s) + h * m0 * (3 * s2 - 4 * s + 1) + v1 * (-6 * s2 + 6 * s) +
          h * m1 * (3 * s2 - 2 * s)) /
         h;
}

// plateau-aware local maxima; returns candidate indices
std::vector<std::size_t> local_maxima(const std::vector<double>& v) {
  std::vector<std::size_t> out;
  const std::size_t n = v.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[j + 1] == v[i]) ++j;
    const bool left_ok = (i == 0) || v[i - 1] < v[i];
    const bool right_ok = (j + 1 == n) || v[j + 1] < v[i];
    if (left_ok && right_ok) out.push_back((i + j) / 2);
    i = j + 1;
  }
  return out;
}

}  // namespace

EnvelopeSpline envelope(const std::vector<double>& t, const std::vector<double>& v,
                        double max_pivot_gap) {
  if (t.empty() || t.size() != v.size())
    throw std::invalid_argument("envelope: empty or mismatched series");
  if (!(max_pivot_gap > 0.0))
    throw std::invalid_argument("envelope: max pivot gap must be positive");

  // empirical CDF of the series values
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  auto cdf = [&](double value) {
    const auto upper = std::upper_bound(sorted.begin(), sorted.end(), value);
    return static_cast<double>(upper - sorted.begin()) / sorted.size();
  };

  std::vector<std::size_t> candidates = local_maxima(v);
  // greedy by descending value; earlier time wins ties
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    if (v[a] != v[b]) return v[a] > v[b];
    return t[a] < t[b];
  });

  std::vector<std::size_t> accepted;
  std::set<double> accepted_t;
  for (std::size_t idx : candidates) {
    const double required = max_pivot_gap * (1.0 - cdf(v[idx]));
    bool ok = true;
    auto it = accepted_t.lower_bound(t[idx]);
    if (it != accepted_t.end() && *it - t[idx] < required) ok = false;
    if (ok && it != accepted_t.begin() && t[idx] - *std::prev(it) < required) ok = false;
    if (ok) {
      accepted.push_back(idx);
      accepted_t.insert(t[idx]);
    }
  }

  // the series ends anchor the spline
  accepted.push_back(0);
  accepted.push_back(v.size() - 1);
  std::sort(accepted.begin(), accepted.end());
  accepted.erase(std::unique(accepted.begin(), accepted.end()), accepted.end());

  EnvelopeSpline env;
  env.max_pivot_gap_ = max_pivot_gap;
  env.pivots_.reserve(accepted.size());
  for (std::size_t idx : accepted) env.pivots_.push_back({t[idx], v[idx], 0.0});

  // Fritsch–Butland monotone tangents, zero at the ends and at sign changes
  auto& ps = env.pivots_;
  const std::size_t m = ps.size();
  if (m >= 3) {
    std::vector<double> h(m - 1), d(m - 1);
    for (std::size_t k = 0; k + 1 < m; ++k) {
      h[k] = ps[k + 1].t - ps[k].t;
      d[k] = (ps[k + 1].value - ps[k].value) / h[k];
    }
    for (std::size_t k = 1; k + 1 < m; ++k) {
      const double prod = d[k - 1] * d[k];
      if (prod > 0.0) {
        const double a = (h[k - 1] + 2.0 * h[k]) / (3.0 * (h[k - 1] + h[k]));
        ps[k].tangent = prod / (a * d[k] + (1.0 - a) * d[k - 1]);
      }
    }
  }
  return env;
}

double EnvelopeSpline::value_at(double t) const {
  if (pivots_.empty()) return 0.0;
  if (t <= pivots_.front().t) return pivots_.front().value;
  if (t >= pivots_.back().t) return pivots_.back().value;
  auto it = std::upper_bound(pivots_.begin(), pivots_.end(), t,
                             [](double value, const Pivot& p) { return value < p.t; });
  const Pivot& b = *it;
  const Pivot& a = *(it - 1);
  const double h = b.t - a.t;
  return hermite(a.value, a.tangent, b.value, b.tangent, h, (t - a.t) / h);
}

double EnvelopeSpline::derivative_at(double t) const {
  if (pivots_.size() < 2 || t <= pivots_.front().t || t >= pivots_.back().t) return 0.0;
  auto it = std::upper_bound(pivots_.begin(), pivots_.end(), t,
                             [](double value, const Pivot& p) { return value < p.t; });
  const Pivot& b = *it;
  const Pivot& a = *(it - 1);
  const double h = b.t - a.t;
  return hermite_deriv(a.value, a.tangent, b.value, b.tangent, h, (t - a.t) / h);
}

std::vector<Peak> find_peaks(const EnvelopeSpline& env) {
  const auto& ps = env.pivots();
  std::vector<Peak> peaks;
  if (ps.size() < 3) return peaks;
  const auto m = static_cast<std::ptrdiff_t>(ps.size());

  // Pivot maxima: the envelope drops on both sides beyond any run of equal
  // pivots. These are stationary (the monotone tangent is zero there) and
  // segments between pivots cannot overshoot, so pivot maxima are exactly
  // the spline's stationary maxima.
  for (std::ptrdiff_t k = 1; k + 1 < m; ++k) {
    std::ptrdiff_t l = k - 1;
    while (l >= 0 && ps[l].value == ps[k].value) --l;
    std::ptrdiff_t r = k + 1;
    while (r < m && ps[r].value == ps[k].value) ++r;
    if (l >= 0 && r < m && ps[l].value < ps[k].value && ps[r].value < ps[k].value)
      peaks.push_back({ps[k].t, ps[k].value});
  }

  // Interior stationary roots of the per-segment quadratic derivative, in
  // case a segment does bend through a maximum away from its pivots.
  for (std::ptrdiff_t k = 0; k + 1 < m; ++k) {
    const double h = ps[k + 1].t - ps[k].t;
    const double v0 = ps[k].value, v1 = ps[k + 1].value;
    const double m0 = ps[k].tangent, m1 = ps[k + 1].tangent;
    const double A = 6 * (v0 - v1) + 3 * h * (m0 + m1);
    const double B = -6 * (v0 - v1) - 4 * h * m0 - 2 * h * m1;
    const double C = h * m0;

    std::vector<double> roots;
    if (std::abs(A) < 1e-300) {
      if (std::abs(B) > 1e-300) roots.push_back(-C / B);
    } else {
      const double disc = B * B - 4 * A * C;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        roots.push_back((-B - sq) / (2 * A));
        roots.push_back((-B + sq) / (2 * A));
      }
    }
    for (double s : roots) {
      if (s <= 1e-7 || s >= 1.0 - 1e-7) continue;
      const double ts = ps[k].t + s * h;
      const double before = env.derivative_at(ps[k].t + std::max(s - 1e-4, 1e-9) * h);
      const double after = env.derivative_at(ps[k].t + std::min(s + 1e-4, 1.0 - 1e-9) * h);
      if (before > 0.0 && after < 0.0) peaks.push_back({ts, env.value_at(ts)});
    }
  }

  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.t < b.t; });
  return peaks;
}

PeakSearchResult find_peaks_with_target(const std::vector<double>& t,
                                        const std::vector<double>& v, int target_count,
                                        double initial_gap, int band_lo, int band_hi) {
  if (band_lo < 0) band_lo = std::max(1, target_count - 1);
  if (band_hi < 0) band_hi = target_count + 2;

  auto evaluate = [&](double gap) {
    PeakSearchResult r;
    r.peaks = find_peaks(envelope(t, v, gap));
    r.gap_used = gap;
    r.achieved_count = static_cast<int>(r.peaks.size());
    r.target_met = r.achieved_count >= band_lo && r.achieved_count <= band_hi;
    return r;
  };

  PeakSearchResult best = evaluate(initial_gap);
  if (best.target_met || target_count <= 0) return best;

  auto closer = [&](const PeakSearchResult& a, const PeakSearchResult& b) {
    return std::abs(a.achieved_count - target_count) < std::abs(b.achieved_count - target_count);
  };

  // larger gaps → sparser pivots → fewer peaks; bracket then bisect
  double lo = initial_gap, hi = initial_gap;
  const double span = t.empty() ? 1.0 : std::max(1.0, t.back() - t.front());
  if (best.achieved_count > band_hi) {
    for (int i = 0; i < 60 && hi < span * 1024; ++i) {
      hi *= 2.0;
      auto r = evaluate(hi);
      if (closer(r, best)) best = r;
      if (r.target_met) return r;
      if (r.achieved_count <= band_hi) break;
    }
  } else {
    for (int i = 0; i < 60 && lo > 1e-6; ++i) {
      lo *= 0.5;
      auto r = evaluate(lo);
      if (closer(r, best)) best = r;
      if (r.target_met) return r;
      if (r.achieved_count >= band_lo) break;
    }
  }

  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    auto r = evaluate(mid);
    if (closer(r, best)) best = r;
    if (r.target_met) return r;
    if (r.achieved_count > band_hi) lo = mid;
    else hi = mid;
    if (hi - lo < 1e-9) break;
  }
  return best;  // target_met == false, closest achieved count reported
}

Distribution distribution(const std::vector<double>& values, double bin_width) {
  if (values.empty()) throw std::invalid_argument("distribution: empty series");
  if (!(bin_width > 0.0)) throw std::invalid_argument("distribution: bin width must be positive");

  Distribution d;
  d.bin_width = bin_width;
  d.max_value = *std::max_element(values.begin(), values.end());
  const std::size_t bins = static_cast<std::size_t>(d.max_value / bin_width) + 1;
  d.counts.assign(bins, 0);
  for (double v : values) {
    auto idx = std::min(static_cast<std::size_t>(v / bin_width), bins - 1);
    ++d.counts[idx];
  }
  d.pdf.resize(bins);
  d.cdf.resize(bins);
  double running = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    d.pdf[i] = static_cast<double>(d.counts[i]) / values.size() / bin_width;
    running += static_cast<double>(d.counts[i]) / values.size();
    d.cdf[i] = running;
  }
  return d;
}

double trend(const std::vector<double>& t, const std::vector<double>& v) {
  if (t.size() != v.size() || t.size() < 2)
    throw std::invalid_argument("trend: need at least 2 points");
  double tm = 0.0, vm = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    tm += t[i];
    vm += v[i];
  }
  tm /= t.size();
  vm /= v.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    num += (t[i] - tm) * (v[i] - vm);
    den += (t[i] - tm) * (t[i] - tm);
  }
  if (den == 0.0) throw std::invalid_argument("trend: all samples share one time");
  return num / den;
}

namespace {

ComponentStats stats_for(const std::vector<double>& t, const std::vector<double>& v) {
  ComponentStats s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= v.size();
  double var = 0.0;
  for (double x : v) var += (x - s.mean) * (x - s.mean);
  s.sigma = std::sqrt(var / v.size());
  s.cv = s.mean != 0.0 ? s.sigma / s.mean : 0.0;
  if (v.size() >= 2) {
    try {
      s.slope = trend(t, v);
    } catch (const std::invalid_argument&) {
      s.slope = 0.0;
    }
  }
  return s;
}

}  // namespace

MatchSummary summarize(const SampleStream& stream, const ViSeries& series) {
  MatchSummary s;

  std::vector<double> t = series.times();
  auto pull = [&](auto member) {
    std::vector<double> out;
    out.reserve(series.points.size());
    for (const auto& p : series.points) out.push_back(p.*member);
    return out;
  };
  s.total = stats_for(t, pull(&ViPoint::total));
  s.home = stats_for(t, pull(&ViPoint::home));
  s.visitor = stats_for(t, pull(&ViPoint::visitor));
  s.compositional = stats_for(t, pull(&ViPoint::vic));
  s.formation = stats_for(t, pull(&ViPoint::vif));

  // canonical-key bookkeeping over the full stream
  std::vector<CanonicalKey> keys;
  keys.reserve(stream.samples.size());
  for (const auto& sample : stream.samples) keys.emplace_back(sample.clustering);

  std::unordered_set<CanonicalKey, CanonicalKeyHash> seen;
  std::int64_t nulls = 0, applicable_pairs = 0;
  std::int64_t changed = 0, reappeared = 0;
  int full_roster = 0;
  for (const auto& sample : stream.samples)
    full_roster = std::max(full_roster, sample.clustering.node_count());

  std::unordered_set<CanonicalKey, CanonicalKeyHash> unique_keys;
  std::set<std::vector<int>> full_formations;
  for (std::size_t i = 0; i < stream.samples.size(); ++i) {
    if (i > 0 && !stream.samples[i].roster_boundary) {
      ++applicable_pairs;
      if (keys[i] == keys[i - 1]) {
        ++nulls;
      } else {
        ++changed;
        if (seen.count(keys[i])) ++reappeared;
      }
    }
    seen.insert(keys[i]);
    unique_keys.insert(keys[i]);
    if (stream.samples[i].clustering.node_count() == full_roster)
      full_formations.insert(formation_of(stream.samples[i].clustering).sizes());
  }
  s.null_transition_fraction =
      applicable_pairs > 0 ? static_cast<double>(nulls) / applicable_pairs : 0.0;
  s.unique_clusterings = static_cast<std::int64_t>(unique_keys.size());
  s.unique_full_formations = static_cast<std::int64_t>(full_formations.size());
  s.reappearance_rate = changed > 0 ? static_cast<double>(reappeared) / changed : 0.0;
  return s;
}

}  // namespace vibit
