#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vibit {

enum class Team : std::uint8_t { Home, Visitor };
enum class Role : std::uint8_t { Player, GoalFrame };

/// One tracked node. Goal frames carry the team defending them.
struct NodeInfo {
  int id = 0;
  Role role = Role::Player;
  Team team = Team::Home;
};

/// Immutable id -> attribute table, kept sorted by id. Ids must be unique.
class Roster {
 public:
  Roster() = default;
  explicit Roster(std::vector<NodeInfo> nodes);

  const std::vector<NodeInfo>& nodes() const { return nodes_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  bool contains(int id) const;
  const NodeInfo& info(int id) const;  // throws std::invalid_argument on unknown id
  std::vector<int> ids() const;

 private:
  std::vector<NodeInfo> nodes_;
};

/// Validation profile: Generic allows singleton clusters, Soccer requires
/// every cluster to have at least 2 nodes.
enum class Profile { Generic, Soccer };

/// Sorted vector of unique node ids.
using NodeSet = std::vector<int>;

/// Multiset of cluster sizes, stored sorted descending.
class Formation {
 public:
  Formation() = default;
  explicit Formation(std::vector<int> sizes);  // throws on non-positive size

  const std::vector<int>& sizes() const { return sizes_; }
  int total() const { return total_; }
  int part_count() const { return static_cast<int>(sizes_.size()); }
  /// Compact exponent form, e.g. "{2^4,3^4,4}".
  std::string to_string() const;

  bool operator==(const Formation&) const = default;
  bool operator<(const Formation& other) const { return sizes_ < other.sizes_; }

 private:
  std::vector<int> sizes_;
  int total_ = 0;
};

/// A partition of the roster into disjoint non-empty clusters.
///
/// Stored canonically: nodes sorted within each cluster, clusters sorted by
/// (size, smallest node id). Immutable after construction; safe to share
/// across threads.
class Clustering {
 public:
  /// Validates disjointness, full cover of the roster, non-empty clusters
  /// and (under Profile::Soccer) the minimum cluster size of 2.
  /// Throws std::invalid_argument naming the first violation.
  static Clustering make(std::vector<NodeSet> clusters, NodeSet roster,
                         Profile profile = Profile::Generic);

  const std::vector<NodeSet>& clusters() const { return clusters_; }
  const NodeSet& roster() const { return roster_; }
  int node_count() const { return static_cast<int>(roster_.size()); }
  int cluster_count() const { return static_cast<int>(clusters_.size()); }

  /// Rank of a node id within the sorted roster; -1 if absent.
  int rank_of(int node) const;
  /// Index of the cluster containing `node`; throws if the node is unknown.
  int cluster_index_of(int node) const;
  /// Cluster index per roster rank (size == node_count()).
  const std::vector<int>& cluster_of_rank() const { return cluster_of_rank_; }

  bool same_roster(const Clustering& other) const { return roster_ == other.roster_; }
  bool operator==(const Clustering& other) const {
    return roster_ == other.roster_ && clusters_ == other.clusters_;
  }

 private:
  Clustering() = default;
  std::vector<NodeSet> clusters_;
  NodeSet roster_;
  std::vector<int> cluster_of_rank_;
};

/// Order-independent encoding of a clustering's cluster sets, with a
/// precomputed hash. Equal iff the cluster sets are equal.
class CanonicalKey {
 public:
  CanonicalKey() = default;
  explicit CanonicalKey(const Clustering& c);

  std::uint64_t hash() const { return hash_; }
  const std::vector<std::int32_t>& encoding() const { return encoding_; }

  bool operator==(const CanonicalKey& other) const {
    return hash_ == other.hash_ && encoding_ == other.encoding_;
  }

 private:
  std::uint64_t hash_ = 0;
  std::vector<std::int32_t> encoding_;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const {
    return static_cast<std::size_t>(k.hash());
  }
};

/// Integer node-flow matrix between two clusterings of the same roster.
/// counts(i, j) = |x_i ∩ y_j| with clusters in canonical order.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  ConfusionMatrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int at(int i, int j) const { return counts_[static_cast<std::size_t>(i) * cols_ + j]; }
  void set(int i, int j, int v);

  int row_sum(int i) const { return row_sums_[i]; }
  int col_sum(int j) const { return col_sums_[j]; }
  int total() const { return total_; }

  Formation row_formation() const;
  Formation col_formation() const;

 private:
  int rows_ = 0, cols_ = 0, total_ = 0;
  std::vector<int> counts_;
  std::vector<int> row_sums_, col_sums_;
};

/// Eq.-1 constructor; see Clustering::make.
Clustering make_clustering(std::vector<NodeSet> clusters, NodeSet roster,
                           Profile profile = Profile::Generic);

/// The multiset of cluster sizes of a clustering.
Formation formation_of(const Clustering& c);

/// Node-flow matrix between clusterings of the same roster. O(n + k·l).
/// Throws std::invalid_argument on roster mismatch.
ConfusionMatrix confusion(const Clustering& x, const Clustering& y);

CanonicalKey canonical_key(const Clustering& c);

}  // namespace vibit
