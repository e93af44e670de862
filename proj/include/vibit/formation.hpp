#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "vibit/core.hpp"
#include "vibit/metric.hpp"

namespace vibit {

using BigInt = boost::multiprecision::cpp_int;

/// A formation-to-formation move: the smallest VI any pair of clusterings
/// realizing (source, dest) can have, with a confusion matrix witnessing it.
struct FormationTransition {
  Formation source;
  Formation dest;
  Bits min_vi = 0.0;
  ConfusionMatrix witness;
};

inline constexpr int kDefaultExactLimit = 10;

/// Global minimum of VI over all integer matrices with row sums `source`
/// and column sums `dest`, by branch-and-bound enumeration. Reference
/// oracle only: throws if the node count exceeds `exact_node_limit`.
FormationTransition min_formation_vi_exact(const Formation& source, const Formation& dest,
                                           int exact_node_limit = kDefaultExactLimit);

/// Feasible upper bound on the formation minimum: greedy largest-to-largest
/// assignment refined by pairwise-cell exchanges until locally optimal.
/// When a seed matrix is given (it must realize the formation pair), the
/// seed is also refined and the better of the two candidates is returned,
/// so the result never exceeds the seed's VI.
FormationTransition min_formation_vi_heuristic(const Formation& source, const Formation& dest,
                                               const ConfusionMatrix* seed = nullptr);

/// Memo for the seed-independent heuristic branch, keyed by the canonical
/// (sorted) formation pair. Lookup and insert are mutex-guarded.
class FormationViCache {
 public:
  Bits heuristic_min(const Formation& source, const Formation& dest);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<std::vector<int>, std::vector<int>>, Bits> memo_;
};

/// Formation part of a transition's VI: the heuristic minimum seeded with
/// the observed confusion matrix. Guaranteed <= vi(x, y), so the
/// compositional part is never negative. `cache` is optional shared memo.
Bits vif_for_transition(const Clustering& x, const Clustering& y,
                        FormationViCache* cache = nullptr);

/// Exact sizes of the clustering and formation spaces for n nodes.
struct SpaceCounts {
  BigInt partitions;                // integer partitions with parts >= min_part
  BigInt partitions_no_singletons;  // integer partitions with parts >= 2
  BigInt bell;                      // set partitions
  BigInt bell_no_singletons;        // set partitions without singleton blocks
};

/// Exact combinatorial counts via the standard recurrences (partition DP,
/// Bell triangle, and the complementary no-singleton recurrence).
/// Valid for 1 <= n <= 40.
SpaceCounts count_spaces(int n, int min_part = 1);

}  // namespace vibit
