// Test-only reference implementations, kept deliberately independent of the
// library code paths they are used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Clusters = std::vector<std::vector<int>>;
using BigInt = boost::multiprecision::cpp_int;

// Eq.-3 VI straight from set intersections, base-2 logs.
inline double brute_vi(const Clusters& xs, const Clusters& ys, int n) {
  double sum = 0.0;
  for (const auto& x : xs) {
    std::set<int> xset(x.begin(), x.end());
    for (const auto& y : ys) {
      int c = 0;
      for (int v : y)
        if (xset.count(v)) ++c;
      if (c == 0) continue;
      const double r = static_cast<double>(c) / n;
      const double p = static_cast<double>(x.size()) / n;
      const double q = static_cast<double>(y.size()) / n;
      sum += -r * (std::log2(r / p) + std::log2(r / q));
    }
  }
  return sum;
}

// All set partitions of {0..n-1} via restricted growth strings.
inline std::vector<Clusters> all_set_partitions(int n) {
  std::vector<Clusters> out;
  std::vector<int> label(n, 0);
  auto emit = [&] {
    int k = *std::max_element(label.begin(), label.end()) + 1;
    Clusters cs(k);
    for (int i = 0; i < n; ++i) cs[label[i]].push_back(i);
    out.push_back(std::move(cs));
  };
  // iterate restricted growth strings
  std::vector<int> maxi(n, 0);
  while (true) {
    emit();
    int i = n - 1;
    while (i > 0 && label[i] == maxi[i - 1] + 1) --i;
    if (i == 0) break;
    ++label[i];
    for (int j = i + 1; j < n; ++j) label[j] = 0;
    for (int j = i; j < n; ++j) maxi[j] = std::max(label[j], maxi[j - 1]);
  }
  return out;
}

// All non-negative integer matrices with the given margins; no pruning.
inline void all_margin_matrices(const std::vector<int>& rows, const std::vector<int>& cols,
                                const std::function<void(const std::vector<int>&)>& visit) {
  const std::size_t k = rows.size(), l = cols.size();
  std::vector<int> m(k * l, 0), rem_col(cols);
  std::function<void(std::size_t, std::size_t, int)> rec = [&](std::size_t i, std::size_t j,
                                                               int rem_row) {
    if (j == l) {
      if (rem_row != 0) return;
      if (i + 1 == k) {
        visit(m);
        return;
      }
      rec(i + 1, 0, rows[i + 1]);
      return;
    }
    for (int v = 0; v <= std::min(rem_row, rem_col[j]); ++v) {
      m[i * l + j] = v;
      rem_col[j] -= v;
      rec(i, j + 1, rem_row - v);
      rem_col[j] += v;
      m[i * l + j] = 0;
    }
  };
  if (!rows.empty()) rec(0, 0, rows[0]);
}

inline double matrix_vi(const std::vector<int>& m, const std::vector<int>& rows,
                        const std::vector<int>& cols, int n) {
  double s = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const int c = m[i * cols.size() + j];
      if (c > 0)
        s += static_cast<double>(c) / n *
             (std::log2(static_cast<double>(rows[i]) / c) +
              std::log2(static_cast<double>(cols[j]) / c));
    }
  return s;
}

// Exhaustive minimum of Eq. 3 over the transportation polytope's integer
// points.
inline double brute_min_formation_vi(const std::vector<int>& rows, const std::vector<int>& cols,
                                     int n) {
  double best = std::numeric_limits<double>::infinity();
  all_margin_matrices(rows, cols,
                      [&](const std::vector<int>& m) { best = std::min(best, matrix_vi(m, rows, cols, n)); });
  return best;
}

// All integer partitions of n, largest part first.
inline std::vector<std::vector<int>> all_partitions(int n, int min_part = 1) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rem, int max_part) {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(rem, max_part); p >= min_part; --p) {
      cur.push_back(p);
      rec(rem - p, p);
      cur.pop_back();
    }
  };
  rec(n, n);
  return out;
}

// Bell numbers by the binomial recurrence B(n+1) = sum C(n,k) B(k) —
// a different route than the Bell triangle used by the library.
inline std::vector<BigInt> bell_numbers(int n) {
  std::vector<std::vector<BigInt>> choose(n + 1, std::vector<BigInt>(n + 1, 0));
  for (int i = 0; i <= n; ++i) {
    choose[i][0] = 1;
    for (int j = 1; j <= i; ++j)
      choose[i][j] = choose[i - 1][j - 1] + (j <= i - 1 ? choose[i - 1][j] : BigInt(0));
  }
  std::vector<BigInt> bell(n + 1);
  bell[0] = 1;
  for (int m = 0; m < n; ++m) {
    BigInt s = 0;
    for (int k = 0; k <= m; ++k) s += choose[m][k] * bell[k];
    bell[m + 1] = s;
  }
  return bell;
}

// No-singleton set partition count by inclusion-exclusion:
// V(n) = sum_k (-1)^k C(n,k) B(n-k).
inline BigInt no_singleton_partitions(int n) {
  auto bell = bell_numbers(n);
  std::vector<BigInt> choose(n + 1, 0);
  choose[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j >= 1; --j) choose[j] += choose[j - 1];
  BigInt s = 0;
  for (int k = 0; k <= n; ++k) {
    BigInt term = choose[k] * bell[n - k];
    if (k % 2 == 0) s += term;
    else s -= term;
  }
  return s;
}

// Random restricted-growth-string clustering over ids 0..n-1.
inline Clusters random_partition(int n, std::mt19937_64& rng) {
  std::vector<int> label(n);
  int k = 1;
  label[0] = 0;
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> d(0, k);
    label[i] = d(rng);
    if (label[i] == k) ++k;
  }
  Clusters cs(k);
  for (int i = 0; i < n; ++i) cs[label[i]].push_back(i);
  return cs;
}

// Random clustering with every cluster of size >= 2 (n >= 2): shuffle the
// ids and cut the sequence into random parts of size >= 2.
inline Clusters random_min2_partition(int n, std::mt19937_64& rng) {
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  Clusters cs;
  int i = 0;
  while (i < n) {
    const int remaining = n - i;
    int take;
    if (remaining < 4) {
      take = remaining;  // cannot leave a remainder of 1
    } else {
      std::uniform_int_distribution<int> d(2, std::min(remaining, 6));
      take = d(rng);
      if (remaining - take == 1) ++take;
    }
    cs.emplace_back(ids.begin() + i, ids.begin() + i + take);
    i += take;
  }
  return cs;
}

}  // namespace oracle
