#pragma once

#include <numeric>
#include <vector>

#include "vibit/core.hpp"

namespace testutil {

// Build a validated generic-profile clustering over ids 0..n-1 from nested
// initializer-style cluster lists.
inline vibit::Clustering clustering_over(int n, std::vector<std::vector<int>> clusters,
                                         vibit::Profile profile = vibit::Profile::Generic) {
  std::vector<int> roster(n);
  std::iota(roster.begin(), roster.end(), 0);
  return vibit::make_clustering(std::move(clusters), std::move(roster), profile);
}

// Clustering whose roster is exactly the union of the given clusters.
inline vibit::Clustering clustering(std::vector<std::vector<int>> clusters,
                                    vibit::Profile profile = vibit::Profile::Generic) {
  std::vector<int> roster;
  for (const auto& c : clusters) roster.insert(roster.end(), c.begin(), c.end());
  return vibit::make_clustering(std::move(clusters), std::move(roster), profile);
}

// Half home / half visitor roster over ids 0..n-1, all players.
inline vibit::Roster split_roster(int n) {
  std::vector<vibit::NodeInfo> nodes;
  for (int i = 0; i < n; ++i)
    nodes.push_back({i, vibit::Role::Player, i < n / 2 ? vibit::Team::Home : vibit::Team::Visitor});
  return vibit::Roster(std::move(nodes));
}

// The appendix figure-7 transition, rebuilt from its confusion matrix with
// fresh node ids allocated row-major per cell. Formations {2^4,3^4,4} and
// {2^6,3,4,5}; VI = 0.785615 over 0.9 s.
inline vibit::Clustering fig7_source() {
  return clustering_over(24,
                         {{0, 1},
                          {2, 3},
                          {4, 5, 6},
                          {7, 8},
                          {9, 10, 11},
                          {12, 13, 14},
                          {15, 16, 17},
                          {18, 19, 20, 21},
                          {22, 23}},
                         vibit::Profile::Soccer);
}

inline vibit::Clustering fig7_dest() {
  return clustering_over(24,
                         {{0, 1},
                          {2, 3},
                          {4, 5, 6, 7, 8},
                          {12, 13},
                          {14, 15},
                          {16, 17},
                          {18, 19, 20},
                          {9, 10, 11, 21},
                          {22, 23}},
                         vibit::Profile::Soccer);
}

}  // namespace testutil
