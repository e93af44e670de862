#include "vibit/metric.hpp"

#include <algorithm>
#include <cmath>

namespace vibit {

Bits cell_vi(int count, int row_size, int col_size, int n) {
  if (count <= 0) return 0.0;  // empty intersections contribute nothing
  const double c = count;
  return c / n * (std::log2(static_cast<double>(row_size) / c) +
                  std::log2(static_cast<double>(col_size) / c));
}

Bits vi(const ConfusionMatrix& m) {
  const int n = m.total();
  Bits sum = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      sum += cell_vi(m.at(i, j), m.row_sum(i), m.col_sum(j), n);
  return sum;
}

Bits vi(const Clustering& x, const Clustering& y) {
  if (x.node_count() == 0) throw std::invalid_argument("vi: empty roster");
  return vi(confusion(x, y));
}

double vi_rate(const Clustering& x, const Clustering& y, double dt_seconds) {
  if (!(dt_seconds > 0.0)) throw std::invalid_argument("vi_rate: dt must be positive");
  return vi(x, y) / dt_seconds;
}

Bits node_contribution(const Clustering& x, const Clustering& y, int node) {
  if (!x.same_roster(y))
    throw std::invalid_argument("node_contribution: clusterings have different rosters");
  const int i = x.cluster_index_of(node);  // throws if node unknown
  const int j = y.cluster_index_of(node);
  const NodeSet& xi = x.clusters()[i];
  const NodeSet& yj = y.clusters()[j];
  int count = 0;
  std::size_t a = 0, b = 0;
  while (a < xi.size() && b < yj.size()) {
    if (xi[a] < yj[b]) ++a;
    else if (yj[b] < xi[a]) ++b;
    else { ++count; ++a; ++b; }
  }
  return cell_vi(count, static_cast<int>(xi.size()), static_cast<int>(yj.size()),
                 x.node_count()) / count;
}

ViBreakdown breakdown(const Clustering& x, const Clustering& y, const Roster& roster,
                      Bits formation_vi) {
  if (formation_vi < 0.0)
    throw std::invalid_argument("breakdown: negative formation VI");

  const ConfusionMatrix m = confusion(x, y);
  const int n = m.total();

  // per-cell contributions, reused for every node in the cell
  std::vector<double> cell(static_cast<std::size_t>(m.rows()) * m.cols());
  ViBreakdown out;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      const double v = cell_vi(m.at(i, j), m.row_sum(i), m.col_sum(j), n);
      cell[static_cast<std::size_t>(i) * m.cols() + j] = v;
      out.total += v;
    }
  }

  if (formation_vi > out.total + 1e-9)
    throw std::invalid_argument("breakdown: formation VI exceeds total VI");
  out.formation_part = std::min(formation_vi, out.total);
  out.compositional_part = out.total - out.formation_part;

  const auto& xc = x.cluster_of_rank();
  const auto& yc = y.cluster_of_rank();
  out.per_node.reserve(x.roster().size());
  for (std::size_t r = 0; r < x.roster().size(); ++r) {
    const int i = xc[r], j = yc[r];
    const int count = m.at(i, j);
    const double share = cell[static_cast<std::size_t>(i) * m.cols() + j] / count;
    const int node = x.roster()[r];
    out.per_node.emplace_back(node, share);
    if (roster.info(node).team == Team::Home) out.home += share;
    else out.visitor += share;
  }
  return out;
}

ViBounds vi_bounds(int roster_size, int max_clusters) {
  if (roster_size < 2) throw std::invalid_argument("vi_bounds: roster size must be >= 2");
  if (max_clusters < 1 || max_clusters > roster_size)
    throw std::invalid_argument("vi_bounds: max cluster count must be in [1, n]");
  return {2.0 / roster_size, std::log2(static_cast<double>(max_clusters))};
}

}  // namespace vibit
