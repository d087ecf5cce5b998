#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "netcomm/community.hpp"
#include "netcomm/error.hpp"

namespace netcomm {

namespace {

constexpr double kTieTolerance = 1e-12;

struct WalkCommunity {
  std::size_t size = 0;
  double total_strength = 0.0;
  std::vector<double> walk;                 // P^t_C., averaged over members
  std::map<std::size_t, double> neighbors;  // adjacent community -> connecting weight
  bool alive = false;
};

class WalktrapState {
 public:
  WalktrapState(const Graph& g, std::size_t steps) : n_(g.vertex_count()) {
    inv_strength_.assign(n_, 0.0);
    for (VertexId v = 0; v < n_; ++v) {
      if (g.strength(v) > 0.0) inv_strength_[v] = 1.0 / g.strength(v);
    }
    communities_.resize(2 * n_);
    std::vector<double> next(n_);
    for (VertexId v = 0; v < n_; ++v) {
      auto& c = communities_[v];
      c.size = 1;
      c.total_strength = g.strength(v);
      c.alive = true;
      for (const auto& inc : g.neighbors(v)) c.neighbors[inc.neighbor] = inc.weight;
      if (g.degree(v) == 0) continue;

      c.walk.assign(n_, 0.0);
      c.walk[v] = 1.0;
      for (std::size_t s = 0; s < steps; ++s) {
        std::fill(next.begin(), next.end(), 0.0);
        for (VertexId j = 0; j < n_; ++j) {
          if (c.walk[j] == 0.0) continue;
          const double out = c.walk[j] * inv_strength_[j];
          for (const auto& inc : g.neighbors(j)) next[inc.neighbor] += out * inc.weight;
        }
        c.walk.swap(next);
      }
    }
    for (VertexId v = 0; v < n_; ++v) {
      for (const auto& [u, w] : communities_[v].neighbors) {
        if (v < u) push(v, u);
      }
    }
  }

  // Ward-style increase of mean squared vertex-to-community distance.
  double delta_sigma(std::size_t a, std::size_t b) const {
    const auto& ca = communities_[a];
    const auto& cb = communities_[b];
    double r2 = 0.0;
    for (VertexId k = 0; k < n_; ++k) {
      const double d = ca.walk[k] - cb.walk[k];
      r2 += d * d * inv_strength_[k];
    }
    const double na = static_cast<double>(ca.size), nb = static_cast<double>(cb.size);
    return (na * nb / (na + nb)) * r2 / static_cast<double>(n_);
  }

  bool done() const { return queue_.empty(); }

  struct MergeStep {
    double between;       // weight joining the two communities
    double strength_a;    // total strength of each side
    double strength_b;
  };

  // Merges the closest adjacent pair (ties: smallest ids) into a new
  // dendrogram node.
  MergeStep merge_nearest(Dendrogram& dendrogram) {
    // Scores equal up to rounding count as ties so the id rule is stable.
    auto [score, a, b] = *queue_.begin();
    const double limit = score * (1.0 + kTieTolerance);
    for (auto it = std::next(queue_.begin()); it != queue_.end() && std::get<0>(*it) <= limit; ++it) {
      if (std::pair(std::get<1>(*it), std::get<2>(*it)) < std::pair(a, b)) std::tie(score, a, b) = *it;
    }
    auto& ca = communities_[a];
    auto& cb = communities_[b];
    const MergeStep step{ca.neighbors.at(b), ca.total_strength, cb.total_strength};
    const std::size_t c = dendrogram.merge(a, b, score);

    auto& cc = communities_[c];
    cc.alive = true;
    cc.size = ca.size + cb.size;
    cc.total_strength = ca.total_strength + cb.total_strength;
    cc.walk.assign(n_, 0.0);
    const double na = static_cast<double>(ca.size), nb = static_cast<double>(cb.size);
    for (VertexId k = 0; k < n_; ++k) cc.walk[k] = (na * ca.walk[k] + nb * cb.walk[k]) / (na + nb);
    for (const auto* old : {&ca, &cb}) {
      for (const auto& [d, w] : old->neighbors) {
        if (d != a && d != b) cc.neighbors[d] += w;
      }
    }

    for (std::size_t old : {a, b}) {
      for (const auto& [d, w] : communities_[old].neighbors) {
        drop(old, d);
        communities_[d].neighbors.erase(old);
      }
      communities_[old] = WalkCommunity{};
    }
    for (const auto& [d, w] : cc.neighbors) {
      communities_[d].neighbors[c] = w;
      push(c, d);
    }
    return step;
  }

 private:
  using Key = std::pair<std::size_t, std::size_t>;
  static Key key(std::size_t x, std::size_t y) { return {std::min(x, y), std::max(x, y)}; }

  void push(std::size_t x, std::size_t y) {
    const Key k = key(x, y);
    const double s = delta_sigma(k.first, k.second);
    scores_[k] = s;
    queue_.emplace(s, k.first, k.second);
  }

  void drop(std::size_t x, std::size_t y) {
    const Key k = key(x, y);
    auto it = scores_.find(k);
    if (it == scores_.end()) return;
    queue_.erase({it->second, k.first, k.second});
    scores_.erase(it);
  }

  std::size_t n_;
  std::vector<double> inv_strength_;
  std::vector<WalkCommunity> communities_;
  std::set<std::tuple<double, std::size_t, std::size_t>> queue_;
  std::map<Key, double> scores_;
};

}  // namespace

Hierarchy walktrap(const Graph& g, std::size_t steps) {
  if (steps < 1) throw InputError("walktrap: walk length must be at least 1");
  const std::size_t n = g.vertex_count();
  Hierarchy out{Dendrogram(n), Partition::singletons(n), 0, std::numeric_limits<double>::quiet_NaN()};
  if (g.edge_count() == 0) return out;

  WalktrapState state(g, steps);
  const double two_w = 2.0 * g.total_weight();
  double q = 0.0;
  for (VertexId v = 0; v < n; ++v) q -= (g.strength(v) / two_w) * (g.strength(v) / two_w);
  double best_q = q;
  std::size_t best_cut = 0;

  while (!state.done()) {
    const auto step = state.merge_nearest(out.dendrogram);
    q += 2.0 * step.between / two_w - 2.0 * (step.strength_a / two_w) * (step.strength_b / two_w);
    if (q > best_q + 1e-12) {
      best_q = q;
      best_cut = out.dendrogram.merges().size();
    }
  }
  out.cut = best_cut;
  out.partition = out.dendrogram.cut(best_cut);
  out.modularity = modularity(g, out.partition);
  return out;
}

}  // namespace netcomm
