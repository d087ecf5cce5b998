#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "netcomm/community.hpp"
#include "netcomm/error.hpp"

namespace netcomm {

namespace {

// Brandes accumulation over hop-count shortest paths from each source, using
// only edges with active[e]. Adds each ordered-pair contribution, so callers
// halve the result for unordered pairs.
class BetweennessAccumulator {
 public:
  explicit BetweennessAccumulator(const Graph& g)
      : g_(g), dist_(g.vertex_count()), sigma_(g.vertex_count()), delta_(g.vertex_count()) {}

  void accumulate(std::span<const VertexId> sources, const std::vector<char>& active,
                  std::vector<double>& scores) {
    for (VertexId s : sources) {
      order_.clear();
      reached_.clear();
      dist_[s] = 0;
      sigma_[s] = 1.0;
      reached_.push_back(s);
      std::size_t head = 0;
      order_.push_back(s);
      while (head < order_.size()) {
        const VertexId v = order_[head++];
        for (const auto& inc : g_.neighbors(v)) {
          if (!active[inc.edge]) continue;
          const VertexId w = inc.neighbor;
          if (dist_[w] < 0) {
            dist_[w] = dist_[v] + 1;
            sigma_[w] = 0.0;
            order_.push_back(w);
            reached_.push_back(w);
          }
          if (dist_[w] == dist_[v] + 1) sigma_[w] += sigma_[v];
        }
      }
      for (VertexId v : reached_) delta_[v] = 0.0;
      for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
        const VertexId w = *it;
        for (const auto& inc : g_.neighbors(w)) {
          if (!active[inc.edge]) continue;
          const VertexId v = inc.neighbor;
          if (dist_[v] != dist_[w] - 1) continue;
          const double c = sigma_[v] / sigma_[w] * (1.0 + delta_[w]);
          scores[inc.edge] += c;
          delta_[v] += c;
        }
      }
      for (VertexId v : reached_) dist_[v] = -1;
    }
  }

  void reset() { std::fill(dist_.begin(), dist_.end(), -1); }

 private:
  const Graph& g_;
  std::vector<long> dist_;
  std::vector<double> sigma_;
  std::vector<double> delta_;
  std::vector<VertexId> order_;
  std::vector<VertexId> reached_;
};

std::vector<VertexId> reachable(const Graph& g, VertexId start, const std::vector<char>& active) {
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<VertexId> out{start};
  seen[start] = 1;
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (const auto& inc : g.neighbors(out[head])) {
      if (active[inc.edge] && !seen[inc.neighbor]) {
        seen[inc.neighbor] = 1;
        out.push_back(inc.neighbor);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<double> edge_betweenness_scores(const Graph& g) {
  std::vector<double> scores(g.edge_count(), 0.0);
  std::vector<char> active(g.edge_count(), 1);
  std::vector<VertexId> all(g.vertex_count());
  std::iota(all.begin(), all.end(), VertexId{0});
  BetweennessAccumulator acc(g);
  acc.reset();
  acc.accumulate(all, active, scores);
  for (auto& s : scores) s /= 2.0;
  return scores;
}

Hierarchy girvan_newman(const Graph& g) {
  const std::size_t n = g.vertex_count();
  const std::size_t m = g.edge_count();
  Hierarchy out{Dendrogram(n), Partition::singletons(n), 0, std::numeric_limits<double>::quiet_NaN()};
  if (m == 0) return out;

  std::vector<char> active(m, 1);
  std::vector<double> scores = edge_betweenness_scores(g);
  BetweennessAccumulator acc(g);
  acc.reset();

  std::vector<std::size_t> labels(n);
  std::size_t next_label = 0;
  for (const auto& comp : connected_components(g)) {
    for (VertexId v : comp) labels[v] = next_label;
    ++next_label;
  }
  Partition best = Partition::from_labels(std::span<const std::size_t>(labels));
  double best_q = modularity(g, best);
  std::size_t best_state = 0;

  struct Split {
    VertexId rep_a, rep_b;
    double score;
  };
  std::vector<Split> splits;

  for (std::size_t removed = 0; removed < m; ++removed) {
    // Highest score; near-equal scores resolve to the smaller edge id, which
    // is the lexicographically smaller endpoint pair.
    EdgeId pick = m;
    double top = -1.0;
    for (EdgeId e = 0; e < m; ++e) {
      if (!active[e]) continue;
      if (pick == m || scores[e] > top + 1e-9 * std::max(1.0, top)) {
        pick = e;
        top = scores[e];
      }
    }
    active[pick] = 0;
    scores[pick] = 0.0;
    const Edge& edge = g.edge(pick);

    const auto side_u = reachable(g, edge.u, active);
    std::vector<VertexId> affected = side_u;
    if (!std::binary_search(side_u.begin(), side_u.end(), edge.v)) {
      const auto side_v = reachable(g, edge.v, active);
      splits.push_back({side_u.front(), side_v.front(), top});
      for (VertexId v : side_v) labels[v] = next_label;
      ++next_label;
      affected.insert(affected.end(), side_v.begin(), side_v.end());

      const Partition state = Partition::from_labels(std::span<const std::size_t>(labels));
      const double q = modularity(g, state);
      if (q > best_q + 1e-12) {
        best_q = q;
        best = state;
        best_state = splits.size();
      }
    }

    // Betweenness only changes inside the component that lost the edge.
    for (VertexId v : affected) {
      for (const auto& inc : g.neighbors(v)) scores[inc.edge] = 0.0;
    }
    acc.accumulate(affected, active, scores);
    for (VertexId v : affected) {
      for (const auto& inc : g.neighbors(v)) {
        // Each edge is seen from both endpoints; halve once.
        if (active[inc.edge] && inc.neighbor > v) scores[inc.edge] /= 2.0;
      }
    }
  }

  // Replay the splits backwards as merges, starting from singletons.
  std::vector<std::size_t> parent(n), node(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::iota(node.begin(), node.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto it = splits.rbegin(); it != splits.rend(); ++it) {
    const auto ra = find(it->rep_a), rb = find(it->rep_b);
    const std::size_t merged = out.dendrogram.merge(node[ra], node[rb], it->score);
    parent[std::max(ra, rb)] = std::min(ra, rb);
    node[std::min(ra, rb)] = merged;
  }

  out.cut = splits.size() - best_state;
  out.partition = std::move(best);
  out.modularity = best_q;
  return out;
}

}  // namespace netcomm
