#include "vibit/formation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vibit {

namespace {

// Working representation for the solvers: dense row-major matrix with fixed
// row/col sizes taken from the formations.
struct Table {
  std::vector<int> rows, cols;  // cluster sizes
  std::vector<int> m;           // counts, rows.size() x cols.size()
  int n = 0;

  int& at(std::size_t i, std::size_t j) { return m[i * cols.size() + j]; }
  int at(std::size_t i, std::size_t j) const { return m[i * cols.size() + j]; }

  double value() const {
    double s = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j)
        s += cell_vi(at(i, j), rows[i], cols[j], n);
    return s;
  }
};

Table greedy_assign(const std::vector<int>& rows, const std::vector<int>& cols, int n) {
  Table t;
  t.rows = rows;
  t.cols = cols;
  t.n = n;
  t.m.assign(rows.size() * cols.size(), 0);
  std::vector<int> rr = rows, cc = cols;
  int remaining = n;
  while (remaining > 0) {
    // largest remaining row mass meets largest remaining column mass
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 1; i < rr.size(); ++i)
      if (rr[i] > rr[bi]) bi = i;
    for (std::size_t j = 1; j < cc.size(); ++j)
      if (cc[j] > cc[bj]) bj = j;
    const int q = std::min(rr[bi], cc[bj]);
    t.at(bi, bj) += q;
    rr[bi] -= q;
    cc[bj] -= q;
    remaining -= q;
  }
  return t;
}

// Pairwise-cell exchange descent. A move picks two nonzero cells (r1,c1),
// (r2,c2) on distinct rows and columns and transfers q units to (r1,c2) and
// (r2,c1), preserving all margins. Best-improvement sweeps until no move
// lowers the value.
double local_search(Table& t) {
  struct Cell { std::size_t i, j; };
  double value = t.value();
  const std::size_t k = t.rows.size(), l = t.cols.size();
  bool improved = true;
  while (improved) {
    improved = false;
    std::vector<Cell> nz;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < l; ++j)
        if (t.at(i, j) > 0) nz.push_back({i, j});

    double best_delta = -1e-12;
    std::size_t bi1 = 0, bj1 = 0, bi2 = 0, bj2 = 0;
    int best_q = 0;
    for (std::size_t a = 0; a < nz.size(); ++a) {
      for (std::size_t b = 0; b < nz.size(); ++b) {
        if (a == b) continue;
        const auto [i1, j1] = nz[a];
        const auto [i2, j2] = nz[b];
        if (i1 == i2 || j1 == j2) continue;
        const int cap = std::min(t.at(i1, j1), t.at(i2, j2));
        const double base = cell_vi(t.at(i1, j1), t.rows[i1], t.cols[j1], t.n) +
                            cell_vi(t.at(i2, j2), t.rows[i2], t.cols[j2], t.n) +
                            cell_vi(t.at(i1, j2), t.rows[i1], t.cols[j2], t.n) +
                            cell_vi(t.at(i2, j1), t.rows[i2], t.cols[j1], t.n);
        for (int q = 1; q <= cap; ++q) {
          const double delta =
              cell_vi(t.at(i1, j1) - q, t.rows[i1], t.cols[j1], t.n) +
              cell_vi(t.at(i2, j2) - q, t.rows[i2], t.cols[j2], t.n) +
              cell_vi(t.at(i1, j2) + q, t.rows[i1], t.cols[j2], t.n) +
              cell_vi(t.at(i2, j1) + q, t.rows[i2], t.cols[j1], t.n) - base;
          if (delta < best_delta) {
            best_delta = delta;
            bi1 = i1; bj1 = j1; bi2 = i2; bj2 = j2;
            best_q = q;
          }
        }
      }
    }
    if (best_q > 0) {
      t.at(bi1, bj1) -= best_q;
      t.at(bi2, bj2) -= best_q;
      t.at(bi1, bj2) += best_q;
      t.at(bi2, bj1) += best_q;
      value = t.value();
      improved = true;
    }
  }
  return value;
}

ConfusionMatrix to_confusion(const Table& t) {
  ConfusionMatrix m(static_cast<int>(t.rows.size()), static_cast<int>(t.cols.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < t.cols.size(); ++j)
      m.set(static_cast<int>(i), static_cast<int>(j), t.at(i, j));
  return m;
}

void check_same_total(const Formation& a, const Formation& b, const char* who) {
  if (a.total() != b.total())
    throw std::invalid_argument(std::string(who) + ": formations cover different node counts (" +
                                std::to_string(a.total()) + " vs " + std::to_string(b.total()) +
                                ")");
  if (a.total() == 0) throw std::invalid_argument(std::string(who) + ": empty formations");
}

// Depth-first enumeration of all integer matrices with the given margins,
// row-major, pruning on partial value (all cell contributions are >= 0) and
// on column capacity left for the current row.
struct ExactSearch {
  const std::vector<int>& rows;
  const std::vector<int>& cols;
  int n;
  std::vector<int> rem_col;
  Table current;
  double best_value;
  Table best;

  ExactSearch(const std::vector<int>& r, const std::vector<int>& c, int n_, Table warm,
              double warm_value)
      : rows(r), cols(c), n(n_), rem_col(c), best_value(warm_value), best(std::move(warm)) {
    current.rows = r;
    current.cols = c;
    current.n = n_;
    current.m.assign(r.size() * c.size(), 0);
  }

  void run() { descend(0, 0, rows[0], 0.0); }

  void descend(std::size_t i, std::size_t j, int rem_row, double partial) {
    if (partial >= best_value - 1e-12) return;
    if (j == cols.size()) {
      if (rem_row != 0) return;
      if (i + 1 == rows.size()) {
        best_value = partial;
        best = current;
        return;
      }
      descend(i + 1, 0, rows[i + 1], partial);
      return;
    }
    // remaining cells in this row must be able to absorb rem_row
    int tail_capacity = 0;
    for (std::size_t jj = j; jj < cols.size(); ++jj) tail_capacity += rem_col[jj];
    if (tail_capacity < rem_row) return;

    const int hi = std::min(rem_row, rem_col[j]);
    for (int v = hi; v >= 0; --v) {
      current.at(i, j) = v;
      rem_col[j] -= v;
      descend(i, j + 1, rem_row - v, partial + cell_vi(v, rows[i], cols[j], n));
      rem_col[j] += v;
      current.at(i, j) = 0;
    }
  }
};

Table transpose(const Table& t) {
  Table out;
  out.rows = t.cols;
  out.cols = t.rows;
  out.n = t.n;
  out.m.assign(t.m.size(), 0);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < t.cols.size(); ++j)
      out.at(j, i) = t.at(i, j);
  return out;
}

// Seed-independent heuristic on canonical (swapped-if-needed) orientation,
// making the result exactly symmetric in its arguments.
Table heuristic_core(const Formation& source, const Formation& dest) {
  const bool swapped = dest.sizes() < source.sizes();
  const Formation& a = swapped ? dest : source;
  const Formation& b = swapped ? source : dest;
  Table t = greedy_assign(a.sizes(), b.sizes(), a.total());
  local_search(t);
  return swapped ? transpose(t) : t;
}

}  // namespace

FormationTransition min_formation_vi_heuristic(const Formation& source, const Formation& dest,
                                               const ConfusionMatrix* seed) {
  check_same_total(source, dest, "min_formation_vi_heuristic");

  Table best = heuristic_core(source, dest);
  double best_value = best.value();

  if (seed) {
    if (seed->total() != source.total() ||
        !(seed->row_formation() == source) || !(seed->col_formation() == dest))
      throw std::invalid_argument("min_formation_vi_heuristic: seed does not realize the pair");
    Table s;
    s.rows.reserve(seed->rows());
    s.cols.reserve(seed->cols());
    for (int i = 0; i < seed->rows(); ++i) s.rows.push_back(seed->row_sum(i));
    for (int j = 0; j < seed->cols(); ++j) s.cols.push_back(seed->col_sum(j));
    s.n = seed->total();
    s.m.resize(s.rows.size() * s.cols.size());
    for (int i = 0; i < seed->rows(); ++i)
      for (int j = 0; j < seed->cols(); ++j)
        s.at(i, j) = seed->at(i, j);
    const double seeded = local_search(s);
    if (seeded < best_value) {
      best_value = seeded;
      best = std::move(s);
    }
  }

  return {source, dest, best_value, to_confusion(best)};
}

FormationTransition min_formation_vi_exact(const Formation& source, const Formation& dest,
                                           int exact_node_limit) {
  check_same_total(source, dest, "min_formation_vi_exact");
  if (source.total() > exact_node_limit)
    throw std::invalid_argument("min_formation_vi_exact: " + std::to_string(source.total()) +
                                " nodes exceeds the exact limit of " +
                                std::to_string(exact_node_limit));

  // canonical orientation keeps the search symmetric in (source, dest)
  const bool swapped = dest.sizes() < source.sizes();
  const Formation& a = swapped ? dest : source;
  const Formation& b = swapped ? source : dest;

  Table warm = heuristic_core(a, b);
  ExactSearch search(a.sizes(), b.sizes(), a.total(), warm, warm.value() + 1e-12);
  search.run();
  Table result = swapped ? transpose(search.best) : search.best;
  return {source, dest, result.value(), to_confusion(result)};
}

Bits FormationViCache::heuristic_min(const Formation& source, const Formation& dest) {
  const auto key = std::make_pair(source.sizes(), dest.sizes());
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  const Bits v = min_formation_vi_heuristic(source, dest).min_vi;
  std::lock_guard<std::mutex> lock(mutex_);
  memo_.emplace(key, v);
  return v;
}

std::size_t FormationViCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return memo_.size();
}

Bits vif_for_transition(const Clustering& x, const Clustering& y, FormationViCache* cache) {
  const Formation fx = formation_of(x);
  const Formation fy = formation_of(y);
  if (fx == fy) return 0.0;  // identity coupling is feasible

  const ConfusionMatrix seed = confusion(x, y);

  Bits core;
  if (cache) {
    core = cache->heuristic_min(fx, fy);
  } else {
    core = min_formation_vi_heuristic(fx, fy).min_vi;
  }
  // refine the observed matrix; its value equals vi(x, y), so the result
  // can only be at or below the transition's total VI
  const Bits seeded = min_formation_vi_heuristic(fx, fy, &seed).min_vi;
  return std::min(core, seeded);
}

SpaceCounts count_spaces(int n, int min_part) {
  if (n < 1 || n > 40) throw std::invalid_argument("count_spaces: n must be in [1, 40]");
  if (min_part < 1) throw std::invalid_argument("count_spaces: min_part must be >= 1");

  // integer partitions of v into parts >= m: standard two-variable recurrence
  auto partition_count = [n](int m) {
    // p[v][k] = partitions of v with parts >= m and largest part <= k
    std::vector<std::vector<BigInt>> p(n + 1, std::vector<BigInt>(n + 1, 0));
    for (int k = 0; k <= n; ++k) p[0][k] = 1;
    for (int v = 1; v <= n; ++v)
      for (int k = 1; k <= n; ++k) {
        p[v][k] = p[v][k - 1];
        if (k >= m && v >= k) p[v][k] += p[v - k][k];
      }
    return p[n][n];
  };

  // Bell triangle
  std::vector<BigInt> bell(n + 1);
  bell[0] = 1;
  std::vector<BigInt> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<BigInt> next;
    next.reserve(row.size() + 1);
    next.push_back(row.back());
    for (const BigInt& x : row) next.push_back(next.back() + x);
    row = std::move(next);
    bell[i] = row.front();
  }

  // set partitions without singleton blocks: a(i+1) = B(i) - a(i), a(0) = 1
  std::vector<BigInt> no_single(n + 1);
  no_single[0] = 1;
  for (int i = 0; i < n; ++i) no_single[i + 1] = bell[i] - no_single[i];

  SpaceCounts out;
  out.partitions = partition_count(min_part);
  out.partitions_no_singletons = partition_count(2);
  out.bell = bell[n];
  out.bell_no_singletons = no_single[n];
  return out;
}

}  // namespace vibit
