#include "vibit/core.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace vibit {

namespace {

std::string node_list(const NodeSet& s, std::size_t limit = 8) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < s.size() && i < limit; ++i) {
    if (i) os << ",";
    os << s[i];
  }
  if (s.size() > limit) os << ",...";
  os << "}";
  return os.str();
}

}  // namespace

Roster::Roster(std::vector<NodeInfo> nodes) : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end(),
            [](const NodeInfo& a, const NodeInfo& b) { return a.id < b.id; });
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (nodes_[i].id == nodes_[i + 1].id)
      throw std::invalid_argument("roster: duplicate node id " + std::to_string(nodes_[i].id));
  }
  for (const auto& n : nodes_) {
    if (n.id < 0) throw std::invalid_argument("roster: negative node id");
  }
}

bool Roster::contains(int id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const NodeInfo& n, int v) { return n.id < v; });
  return it != nodes_.end() && it->id == id;
}

const NodeInfo& Roster::info(int id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const NodeInfo& n, int v) { return n.id < v; });
  if (it == nodes_.end() || it->id != id)
    throw std::invalid_argument("roster: unknown node id " + std::to_string(id));
  return *it;
}

std::vector<int> Roster::ids() const {
  std::vector<int> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.id);
  return out;
}

Formation::Formation(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  for (int s : sizes_) {
    if (s <= 0) throw std::invalid_argument("formation: non-positive cluster size");
    total_ += s;
  }
  std::sort(sizes_.begin(), sizes_.end(), std::greater<int>());
}

std::string Formation::to_string() const {
  // ascending with exponents: {2^4,3^4,4}
  std::vector<int> asc(sizes_.rbegin(), sizes_.rend());
  std::ostringstream os;
  os << "{";
  std::size_t i = 0;
  bool first = true;
  while (i < asc.size()) {
    std::size_t j = i;
    while (j < asc.size() && asc[j] == asc[i]) ++j;
    if (!first) os << ",";
    os << asc[i];
    if (j - i > 1) os << "^" << (j - i);
    first = false;
    i = j;
  }
  os << "}";
  return os.str();
}

Clustering Clustering::make(std::vector<NodeSet> clusters, NodeSet roster, Profile profile) {
  std::sort(roster.begin(), roster.end());
  for (std::size_t i = 0; i + 1 < roster.size(); ++i) {
    if (roster[i] == roster[i + 1])
      throw std::invalid_argument("clustering: duplicate node " + std::to_string(roster[i]) +
                                  " in roster");
  }
  if (!roster.empty() && roster.front() < 0)
    throw std::invalid_argument("clustering: negative node id in roster");

  std::size_t covered = 0;
  for (auto& c : clusters) {
    if (c.empty()) throw std::invalid_argument("clustering: empty cluster");
    std::sort(c.begin(), c.end());
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      if (c[i] == c[i + 1])
        throw std::invalid_argument("clustering: duplicate node " + std::to_string(c[i]) +
                                    " within cluster " + node_list(c));
    }
    if (profile == Profile::Soccer && c.size() < 2)
      throw std::invalid_argument("clustering: singleton cluster " + node_list(c) +
                                  " not allowed under soccer profile");
    covered += c.size();
  }
  if (covered != roster.size())
    throw std::invalid_argument(
        "clustering: clusters cover " + std::to_string(covered) + " nodes, roster has " +
        std::to_string(roster.size()) + (covered > roster.size() ? " (overlap or extra nodes)"
                                                                 : " (uncovered nodes)"));

  // canonical cluster order: (size, smallest node)
  std::sort(clusters.begin(), clusters.end(), [](const NodeSet& a, const NodeSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.front() < b.front();
  });

  Clustering out;
  out.cluster_of_rank_.assign(roster.size(), -1);
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    for (int node : clusters[ci]) {
      auto it = std::lower_bound(roster.begin(), roster.end(), node);
      if (it == roster.end() || *it != node)
        throw std::invalid_argument("clustering: node " + std::to_string(node) +
                                    " not in roster");
      auto rank = static_cast<std::size_t>(it - roster.begin());
      if (out.cluster_of_rank_[rank] != -1)
        throw std::invalid_argument("clustering: node " + std::to_string(node) +
                                    " appears in two clusters");
      out.cluster_of_rank_[rank] = static_cast<int>(ci);
    }
  }
  out.clusters_ = std::move(clusters);
  out.roster_ = std::move(roster);
  return out;
}

int Clustering::rank_of(int node) const {
  auto it = std::lower_bound(roster_.begin(), roster_.end(), node);
  if (it == roster_.end() || *it != node) return -1;
  return static_cast<int>(it - roster_.begin());
}

int Clustering::cluster_index_of(int node) const {
  int r = rank_of(node);
  if (r < 0)
    throw std::invalid_argument("clustering: node " + std::to_string(node) + " not in roster");
  return cluster_of_rank_[static_cast<std::size_t>(r)];
}

namespace {
// FNV-1a over 32-bit words; stable across runs and platforms.
std::uint64_t fnv1a(const std::vector<std::int32_t>& words) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::int32_t w : words) {
    auto u = static_cast<std::uint32_t>(w);
    for (int b = 0; b < 4; ++b) {
      h ^= (u >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}
}  // namespace

CanonicalKey::CanonicalKey(const Clustering& c) {
  encoding_.reserve(c.roster().size() + c.clusters().size());
  for (const auto& cluster : c.clusters()) {
    for (int node : cluster) encoding_.push_back(node);
    encoding_.push_back(-1);  // cluster terminator; ids are non-negative
  }
  hash_ = fnv1a(encoding_);
}

ConfusionMatrix::ConfusionMatrix(int rows, int cols)
    : rows_(rows), cols_(cols),
      counts_(static_cast<std::size_t>(rows) * cols, 0),
      row_sums_(rows, 0), col_sums_(cols, 0) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("confusion matrix: empty dimensions");
}

void ConfusionMatrix::set(int i, int j, int v) {
  if (v < 0) throw std::invalid_argument("confusion matrix: negative count");
  int& cell = counts_[static_cast<std::size_t>(i) * cols_ + j];
  row_sums_[i] += v - cell;
  col_sums_[j] += v - cell;
  total_ += v - cell;
  cell = v;
}

Formation ConfusionMatrix::row_formation() const { return Formation(row_sums_); }
Formation ConfusionMatrix::col_formation() const { return Formation(col_sums_); }

Clustering make_clustering(std::vector<NodeSet> clusters, NodeSet roster, Profile profile) {
  return Clustering::make(std::move(clusters), std::move(roster), profile);
}

Formation formation_of(const Clustering& c) {
  std::vector<int> sizes;
  sizes.reserve(c.clusters().size());
  for (const auto& cl : c.clusters()) sizes.push_back(static_cast<int>(cl.size()));
  return Formation(std::move(sizes));
}

ConfusionMatrix confusion(const Clustering& x, const Clustering& y) {
  if (!x.same_roster(y))
    throw std::invalid_argument("confusion: clusterings have different rosters");
  ConfusionMatrix m(x.cluster_count(), y.cluster_count());
  const auto& xc = x.cluster_of_rank();
  const auto& yc = y.cluster_of_rank();
  for (std::size_t r = 0; r < xc.size(); ++r)
    m.set(xc[r], yc[r], m.at(xc[r], yc[r]) + 1);
  return m;
}

CanonicalKey canonical_key(const Clustering& c) { return CanonicalKey(c); }

}  // namespace vibit
