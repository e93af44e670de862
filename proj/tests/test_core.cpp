#include <doctest.h>

#include <random>
#include <unordered_map>

#include "oracles.hpp"
#include "test_util.hpp"
#include "vibit/core.hpp"

using namespace vibit;
using testutil::clustering_over;

TEST_CASE("make_clustering accepts a valid two-pair clustering") {
  auto c = clustering_over(4, {{0, 1}, {2, 3}});
  CHECK(c.cluster_count() == 2);
  CHECK(c.node_count() == 4);
  CHECK(c.clusters()[0] == NodeSet{0, 1});
  CHECK(c.clusters()[1] == NodeSet{2, 3});
}

TEST_CASE("make_clustering rejects malformed inputs") {
  CHECK_THROWS_AS(clustering_over(3, {{0, 1}, {1, 2}}), std::invalid_argument);  // overlap
  CHECK_THROWS_AS(clustering_over(4, {{0, 1}}), std::invalid_argument);          // uncovered
  CHECK_THROWS_AS(clustering_over(2, {{0, 1}, {2, 3}}), std::invalid_argument);  // extra nodes
  CHECK_THROWS_AS(clustering_over(2, {{0, 1}, {}}), std::invalid_argument);      // empty cluster
  CHECK_THROWS_AS(clustering_over(3, {{0, 1}, {2}}, Profile::Soccer), std::invalid_argument);
  CHECK_NOTHROW(clustering_over(3, {{0, 1}, {2}}, Profile::Generic));
}

TEST_CASE("canonical order sorts clusters by size then smallest node") {
  auto c = clustering_over(7, {{6, 5, 4}, {3, 0}, {2, 1}});
  CHECK(c.clusters()[0] == NodeSet{0, 3});
  CHECK(c.clusters()[1] == NodeSet{1, 2});
  CHECK(c.clusters()[2] == NodeSet{4, 5, 6});
  CHECK(c.cluster_index_of(5) == 2);
  CHECK(c.cluster_index_of(3) == 0);
}

using testutil::fig7_dest;
using testutil::fig7_source;

TEST_CASE("formation_of returns the multiset of cluster sizes") {
  CHECK(formation_of(clustering_over(4, {{0, 1}, {2, 3}})) == Formation({2, 2}));
  CHECK(formation_of(fig7_source()) == Formation({2, 2, 2, 2, 3, 3, 3, 3, 4}));
  CHECK(formation_of(fig7_dest()) == Formation({2, 2, 2, 2, 2, 2, 3, 4, 5}));

  std::vector<int> all24(24);
  std::iota(all24.begin(), all24.end(), 0);
  auto single = clustering_over(24, {all24});
  CHECK(formation_of(single) == Formation({24}));
  CHECK(formation_of(single).total() == 24);
  CHECK(Formation({2, 2, 2, 2, 3, 3, 3, 3, 4}).to_string() == "{2^4,3^4,4}");
}

TEST_CASE("confusion of a clustering with itself is monomial") {
  auto c = clustering_over(4, {{0, 1}, {2, 3}});
  auto m = confusion(c, c);
  CHECK(m.at(0, 0) == 2);
  CHECK(m.at(0, 1) == 0);
  CHECK(m.at(1, 0) == 0);
  CHECK(m.at(1, 1) == 2);
  CHECK(m.total() == 4);
}

TEST_CASE("confusion of crossed pairs is uniform") {
  auto x = clustering_over(4, {{0, 1}, {2, 3}});
  auto y = clustering_over(4, {{0, 2}, {1, 3}});
  auto m = confusion(x, y);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(m.at(i, j) == 1);
}

TEST_CASE("confusion rejects different rosters") {
  auto x = clustering_over(4, {{0, 1}, {2, 3}});
  auto y = clustering_over(2, {{0, 1}});
  CHECK_THROWS_AS(confusion(x, y), std::invalid_argument);
}

TEST_CASE("confusion of the figure-7 pair reproduces the appendix matrix") {
  auto m = confusion(fig7_source(), fig7_dest());
  REQUIRE(m.rows() == 9);
  REQUIRE(m.cols() == 9);

  // appendix matrix rows, permuted to canonical cluster order
  const int expected[9][9] = {
      {2, 0, 0, 0, 0, 0, 0, 0, 0},
      {0, 2, 0, 0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 0, 0, 0, 2},
      {0, 0, 0, 0, 0, 2, 0, 0, 0},
      {0, 0, 0, 0, 0, 0, 0, 0, 3},
      {0, 0, 0, 0, 0, 0, 0, 3, 0},
      {0, 0, 2, 1, 0, 0, 0, 0, 0},
      {0, 0, 0, 1, 2, 0, 0, 0, 0},
      {0, 0, 0, 0, 0, 0, 3, 1, 0},
  };
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) CHECK(m.at(i, j) == expected[i][j]);

  // the 4-node simplex spreads 3+1, as in the appendix ("row 8")
  CHECK(m.row_sum(8) == 4);
  CHECK(m.at(8, 6) == 3);
  CHECK(m.at(8, 7) == 1);
}

TEST_CASE("row and column sums of a confusion matrix match the formations") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 8);
    auto x = clustering_over(n, oracle::random_partition(n, rng));
    auto y = clustering_over(n, oracle::random_partition(n, rng));
    auto m = confusion(x, y);
    CHECK(m.row_formation() == formation_of(x));
    CHECK(m.col_formation() == formation_of(y));
    CHECK(m.total() == n);
  }
}

TEST_CASE("canonical_key is order independent") {
  auto a = clustering_over(4, {{0, 1}, {2, 3}});
  auto b = clustering_over(4, {{3, 2}, {1, 0}});
  auto c = clustering_over(4, {{0, 2}, {1, 3}});
  CHECK(canonical_key(a) == canonical_key(b));
  CHECK_FALSE(canonical_key(a) == canonical_key(c));
}

TEST_CASE("canonical_key has no collisions over random 24-node clusterings") {
  std::mt19937_64 rng(11);
  std::vector<Clustering> cs;
  std::vector<CanonicalKey> keys;
  for (int i = 0; i < 1000; ++i) {
    cs.push_back(clustering_over(24, oracle::random_partition(24, rng)));
    keys.emplace_back(cs.back());
  }
  // oracle: pairwise set comparison
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      const bool same_sets = cs[i].clusters() == cs[j].clusters();
      CHECK((keys[i] == keys[j]) == same_sets);
    }
}

TEST_CASE("canonical_key is a congruence for clustering equality") {
  // >= 10^4 random clusterings, bucketed by key and cross-checked
  std::mt19937_64 rng(13);
  std::unordered_map<CanonicalKey, Clustering, CanonicalKeyHash> seen;
  for (int i = 0; i < 12000; ++i) {
    const int n = 4 + static_cast<int>(rng() % 9);
    auto c = clustering_over(n, oracle::random_partition(n, rng));
    auto key = canonical_key(c);
    auto [it, inserted] = seen.emplace(key, c);
    if (!inserted) CHECK(it->second.clusters() == c.clusters());
  }
  CHECK(seen.size() > 1000);
}
