#pragma once

// Fixtures, random generators and brute-force oracles shared by the test
// binaries. Oracles work on dense matrices and enumeration only; they do not
// call the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "netcomm/community.hpp"
#include "netcomm/graph.hpp"
#include "netcomm/random.hpp"

namespace netcomm::testing {

inline Graph graph_of(std::initializer_list<EdgeRow> rows) {
  std::vector<EdgeRow> v(rows);
  return from_edge_list(v);
}

// Two triangles {1,2,3}, {4,5,6} joined by the bridge 3-4; ids 0..5.
inline Graph barbell6() {
  return graph_of({{"1", "2", 1}, {"1", "3", 1}, {"2", "3", 1}, {"3", "4", 1},
                   {"4", "5", 1}, {"4", "6", 1}, {"5", "6", 1}});
}

inline Graph barbell6_without_bridge() {
  return graph_of({{"1", "2", 1}, {"1", "3", 1}, {"2", "3", 1}, {"4", "5", 1}, {"4", "6", 1}, {"5", "6", 1}});
}

inline Graph complete(std::size_t n, double w = 1.0) {
  std::vector<EdgeRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) rows.push_back({std::to_string(i), std::to_string(j), w});
  }
  return from_edge_list(rows);
}

inline Graph star(std::size_t leaves) {
  std::vector<EdgeRow> rows;
  for (std::size_t i = 1; i <= leaves; ++i) rows.push_back({"c", "l" + std::to_string(i), 1.0});
  return from_edge_list(rows);
}

inline Graph cycle(std::size_t n) {
  std::vector<EdgeRow> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back({std::to_string(i), std::to_string((i + 1) % n), 1.0});
  return from_edge_list(rows);
}

// k disjoint cliques of `size` vertices; with `bridged`, clique i's last
// vertex links to clique i+1's first vertex. Vertex i*size+j is "c{i}_{j}".
inline Graph planted_cliques(std::size_t k, std::size_t size, bool bridged) {
  std::vector<EdgeRow> rows;
  auto name = [](std::size_t c, std::size_t j) { return "c" + std::to_string(c) + "_" + std::to_string(j); };
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = i + 1; j < size; ++j) rows.push_back({name(c, i), name(c, j), 1.0});
    }
    if (bridged && c + 1 < k) rows.push_back({name(c, size - 1), name(c + 1, 0), 1.0});
  }
  return from_edge_list(rows);
}

inline Partition planted_partition(std::size_t k, std::size_t size) {
  std::vector<std::size_t> labels;
  for (std::size_t c = 0; c < k; ++c) labels.insert(labels.end(), size, c);
  return Partition::from_labels(std::span<const std::size_t>(labels));
}

// G(n, p) with optional integer weights in 1..max_weight; vertices 0..n-1
// are all declared even when isolated.
inline Graph random_graph(Rng& rng, std::size_t n, double p, int max_weight = 1) {
  GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_vertex("v" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) b.add_edge(i, j, 1.0 + static_cast<double>(rng.below(max_weight)));
    }
  }
  return std::move(b).build();
}

using Matrix = std::vector<std::vector<double>>;

inline Matrix dense_adjacency(const Graph& g) {
  const auto n = g.vertex_count();
  Matrix a(n, std::vector<double>(n, 0.0));
  for (const Edge& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = e.weight;
  return a;
}

// Q = 1/2W sum_ij (A_ij - s_i s_j / 2W) [c_i == c_j], straight from the definition.
inline double brute_modularity(const Graph& g, const std::vector<std::size_t>& membership) {
  const auto a = dense_adjacency(g);
  const auto n = a.size();
  std::vector<double> s(n, 0.0);
  double two_w = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) s[i] += a[i][j];
    two_w += s[i];
  }
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (membership[i] == membership[j]) q += a[i][j] - s[i] * s[j] / two_w;
    }
  }
  return q / two_w;
}

// Calls f on every set partition of {0..n-1} (restricted growth strings).
inline void for_each_set_partition(std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> rgs(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      f(rgs);
      return;
    }
    for (std::size_t c = 0; c <= used && c < n; ++c) {
      rgs[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  if (n == 0) {
    f(rgs);
    return;
  }
  rgs[0] = 0;
  rec(1, 1);
}

struct BruteOptimum {
  double q = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<std::size_t>> argmax;  // all optimal partitions (within 1e-12)
};

inline BruteOptimum brute_max_modularity(const Graph& g) {
  BruteOptimum best;
  for_each_set_partition(g.vertex_count(), [&](const std::vector<std::size_t>& p) {
    const double q = brute_modularity(g, p);
    if (q > best.q + 1e-12) {
      best.q = q;
      best.argmax = {p};
    } else if (std::abs(q - best.q) <= 1e-12) {
      best.argmax.push_back(p);
    }
  });
  return best;
}

// All-pairs hop distances and shortest-path counts (Floyd-Warshall style).
struct PathCounts {
  std::vector<std::vector<long>> dist;  // -1 when unreachable
  std::vector<std::vector<double>> sigma;
};

inline PathCounts floyd_warshall_paths(const Graph& g) {
  const auto n = g.vertex_count();
  const long inf = std::numeric_limits<long>::max() / 4;
  std::vector<std::vector<long>> d(n, std::vector<long>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const Edge& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];

  // sigma[s][t] = number of shortest paths, counted by increasing distance.
  std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
  const auto a = dense_adjacency(g);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return d[s][x] < d[s][y]; });
    sigma[s][s] = 1.0;
    for (auto t : order) {
      if (t == s || d[s][t] >= inf) continue;
      for (std::size_t u = 0; u < n; ++u) {
        if (a[u][t] > 0.0 && d[s][u] + 1 == d[s][t]) sigma[s][t] += sigma[s][u];
      }
    }
  }
  PathCounts out{std::vector<std::vector<long>>(n, std::vector<long>(n, -1)), sigma};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (d[i][j] < inf) out.dist[i][j] = d[i][j];
  return out;
}

// Edge betweenness from pair-by-pair path counting over unordered pairs.
inline std::vector<double> brute_edge_betweenness(const Graph& g) {
  const auto pc = floyd_warshall_paths(g);
  const auto n = g.vertex_count();
  std::vector<double> out(g.edge_count(), 0.0);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto [u, v, w, ev] = g.edge(e);
    (void)w;
    (void)ev;
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = s + 1; t < n; ++t) {
        const long dst = pc.dist[s][t];
        if (dst <= 0) continue;
        double share = 0.0;
        if (pc.dist[s][u] >= 0 && pc.dist[v][t] >= 0 && pc.dist[s][u] + 1 + pc.dist[v][t] == dst)
          share += pc.sigma[s][u] * pc.sigma[v][t];
        if (pc.dist[s][v] >= 0 && pc.dist[u][t] >= 0 && pc.dist[s][v] + 1 + pc.dist[u][t] == dst)
          share += pc.sigma[s][v] * pc.sigma[u][t];
        out[e] += share / pc.sigma[s][t];
      }
    }
  }
  return out;
}

inline std::vector<std::vector<std::size_t>> brute_maximal_cliques(const Graph& g, std::size_t min_size) {
  const auto n = g.vertex_count();
  const auto a = dense_adjacency(g);
  std::vector<std::uint32_t> cliques;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j)
        if ((mask >> i & 1) && (mask >> j & 1) && a[i][j] == 0.0) ok = false;
    if (ok) cliques.push_back(mask);
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto m : cliques) {
    bool maximal = true;
    for (auto other : cliques)
      if (other != m && (other & m) == m) maximal = false;
    if (!maximal || static_cast<std::size_t>(__builtin_popcount(m)) < min_size) continue;
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i < n; ++i)
      if (m >> i & 1) c.push_back(i);
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() > y.size() : x < y;
  });
  return out;
}

// Canonical relabelling (first appearance order) for comparing memberships.
inline std::vector<std::size_t> canonical(const std::vector<std::size_t>& labels) {
  std::vector<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& p) { return p.first == labels[i]; });
    if (it == seen.end()) {
      seen.emplace_back(labels[i], seen.size());
      out[i] = seen.size() - 1;
    } else {
      out[i] = it->second;
    }
  }
  return out;
}

// Pearson statistic of a dense count matrix, straight from the formula.
inline double brute_chi_square(const std::vector<std::vector<std::size_t>>& t) {
  const auto r = t.size(), c = t[0].size();
  std::vector<double> rs(r, 0.0), cs(c, 0.0);
  double n = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      rs[i] += static_cast<double>(t[i][j]);
      cs[j] += static_cast<double>(t[i][j]);
      n += static_cast<double>(t[i][j]);
    }
  double x = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      const double e = rs[i] * cs[j] / n;
      x += (static_cast<double>(t[i][j]) - e) * (static_cast<double>(t[i][j]) - e) / e;
    }
  return x;
}

// Exact permutation p-value of a 2x2 table: every way of handing the row-0
// label to r0 of the N units (all equally likely under label permutation) is
// enumerated and its statistic compared with the observed one.
inline double exact_permutation_p_2x2(const std::vector<std::vector<std::size_t>>& t) {
  const std::size_t n = t[0][0] + t[0][1] + t[1][0] + t[1][1];
  const std::size_t r0 = t[0][0] + t[0][1];
  std::vector<int> col(n);  // column label of each unit
  for (std::size_t i = 0; i < n; ++i) col[i] = i < t[0][0] + t[1][0] ? 0 : 1;
  const double observed = brute_chi_square(t);
  std::size_t hits = 0, total = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != r0) continue;
    std::vector<std::vector<std::size_t>> sim(2, std::vector<std::size_t>(2, 0));
    for (std::size_t i = 0; i < n; ++i) ++sim[(mask >> i & 1) ? 0 : 1][col[i]];
    ++total;
    if (brute_chi_square(sim) >= observed * (1.0 - 1e-9)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace netcomm::testing
