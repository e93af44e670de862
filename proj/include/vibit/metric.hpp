#pragma once

#include <utility>
#include <vector>

#include "vibit/core.hpp"

namespace vibit {

/// Bits of information distance. Plain double; always >= 0, bounded by
/// log2(roster size).
using Bits = double;

/// Contribution of one confusion cell to VI: (c/n)·(log2(p/c) + log2(q/c)),
/// 0 for empty cells. p = source cluster size, q = destination cluster size.
Bits cell_vi(int count, int row_size, int col_size, int n);

/// Variation of Information between two clusterings of the same roster,
/// base-2 logs. O(n + k·l). Identical clusterings return exactly 0.
/// Throws std::invalid_argument on roster mismatch or empty roster.
Bits vi(const Clustering& x, const Clustering& y);

/// VI evaluated on a prebuilt confusion matrix.
Bits vi(const ConfusionMatrix& m);

/// VI per second for a transition over dt seconds. Throws on dt <= 0.
double vi_rate(const Clustering& x, const Clustering& y, double dt_seconds);

/// One node's share of the transition VI: the contribution of the unique
/// cell (x_i, y_j) with node in x_i ∩ y_j, split equally over the
/// intersection. Throws if the node is not in the roster.
Bits node_contribution(const Clustering& x, const Clustering& y, int node);

/// Full decomposition of one transition. total = formation_part +
/// compositional_part holds exactly by construction; per-node and per-team
/// shares sum back to total.
struct ViBreakdown {
  Bits total = 0.0;
  Bits formation_part = 0.0;
  Bits compositional_part = 0.0;
  Bits home = 0.0;
  Bits visitor = 0.0;
  std::vector<std::pair<int, Bits>> per_node;  // sorted by node id
};

/// Decompose vi(x, y) given the formation part. Team attribution follows the
/// roster; goal frames count toward their defending team. Throws if
/// formation_vi exceeds the total VI (beyond 1e-9 slack).
ViBreakdown breakdown(const Clustering& x, const Clustering& y, const Roster& roster,
                      Bits formation_vi);

/// Theoretical VI range for a roster of n nodes whose clusterings have at
/// most m clusters: smallest nonzero value 2/n, and log2(m) — the extreme
/// reached when a single cluster splits into m equal parts.
struct ViBounds {
  Bits min_nonzero;
  Bits max;
};
ViBounds vi_bounds(int roster_size, int max_clusters);

}  // namespace vibit
