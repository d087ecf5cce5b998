#include <cmath>
#include <numeric>

#include "netcomm/community.hpp"
#include "netcomm/error.hpp"
#include "netcomm/random.hpp"

namespace netcomm {

double spinglass_energy(const Graph& g, const Partition& p, double gamma) {
  if (p.vertex_count() != g.vertex_count()) throw InputError("partition does not cover the graph");
  const double two_w = 2.0 * g.total_weight();
  if (two_w <= 0.0) return 0.0;
  double internal = 0.0;
  for (const Edge& e : g.edges()) {
    if (p[e.u] == p[e.v]) internal += e.weight;
  }
  std::vector<double> spin_strength(p.community_count(), 0.0);
  double self = 0.0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    spin_strength[p[v]] += g.strength(v);
    self += g.strength(v) * g.strength(v);
  }
  double null_pairs = -self;
  for (double s : spin_strength) null_pairs += s * s;
  // sum_{i<j same spin} s_i s_j = (sum_c S_c^2 - sum_i s_i^2) / 2
  return -(internal - gamma * (null_pairs / 2.0) / two_w);
}

namespace {

class SpinState {
 public:
  SpinState(const Graph& g, double gamma, std::size_t q, std::vector<std::size_t> spins)
      : g_(g), gamma_(gamma), two_w_(2.0 * g.total_weight()), spins_(std::move(spins)),
        spin_strength_(q, 0.0), weight_to_(q, 0.0) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) spin_strength_[spins_[v]] += g.strength(v);
  }

  // Loads weight_to_ with the weight from v into each spin state.
  void gather(VertexId v) {
    for (std::size_t s : touched_) weight_to_[s] = 0.0;
    touched_.clear();
    for (const auto& inc : g_.neighbors(v)) {
      const std::size_t s = spins_[inc.neighbor];
      if (weight_to_[s] == 0.0) touched_.push_back(s);
      weight_to_[s] += inc.weight;
    }
  }

  // Energy change for moving v (after gather(v)) to spin `to`.
  double delta(VertexId v, std::size_t to) const {
    const std::size_t from = spins_[v];
    if (to == from) return 0.0;
    const double sv = g_.strength(v);
    const double join = weight_to_[to] - gamma_ * sv * spin_strength_[to] / two_w_;
    const double leave = weight_to_[from] - gamma_ * sv * (spin_strength_[from] - sv) / two_w_;
    return -join + leave;
  }

  void move(VertexId v, std::size_t to) {
    const double sv = g_.strength(v);
    spin_strength_[spins_[v]] -= sv;
    spin_strength_[to] += sv;
    spins_[v] = to;
  }

  std::size_t spin(VertexId v) const { return spins_[v]; }
  const std::vector<std::size_t>& spins() const { return spins_; }

 private:
  const Graph& g_;
  double gamma_;
  double two_w_;
  std::vector<std::size_t> spins_;
  std::vector<double> spin_strength_;
  std::vector<double> weight_to_;
  std::vector<std::size_t> touched_;
};

}  // namespace

Partition spinglass(const Graph& g, const SpinglassOptions& opts) {
  if (opts.q_max < 2) throw InputError("spinglass: q_max must be at least 2");
  if (!(opts.cooling > 0.0 && opts.cooling < 1.0)) throw InputError("spinglass: cooling must be in (0, 1)");
  if (!(opts.t_stop > 0.0 && opts.t_stop < opts.t_start)) {
    throw InputError("spinglass: temperatures must satisfy 0 < t_stop < t_start");
  }
  if (opts.sweeps_per_temperature < 1) throw InputError("spinglass: need at least one sweep per temperature");

  const std::size_t n = g.vertex_count();
  if (n == 0) return {};
  if (connected_components(g).size() != 1) {
    throw ConnectivityError(
        "spinglass requires a connected network; pass the largest connected component instead");
  }
  if (n == 1) return Partition::single(1);

  const std::size_t q = opts.q_max;
  Rng rng(opts.seed);
  std::vector<std::size_t> initial(n);
  for (auto& s : initial) s = static_cast<std::size_t>(rng.below(q));
  SpinState state(g, opts.gamma, q, std::move(initial));

  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  for (double temp = opts.t_start; temp > opts.t_stop; temp *= opts.cooling) {
    rng.shuffle(std::span<VertexId>(order));
    for (std::size_t sweep = 0; sweep < opts.sweeps_per_temperature; ++sweep) {
      for (VertexId v : order) {
        // Uniform proposal over the other q - 1 states.
        std::size_t to = static_cast<std::size_t>(rng.below(q - 1));
        if (to >= state.spin(v)) ++to;
        state.gather(v);
        const double dh = state.delta(v, to);
        if (dh <= 0.0 || rng.uniform() < std::exp(-dh / temp)) state.move(v, to);
      }
    }
  }

  // Zero-temperature quench: steepest single-spin descent until stable.
  for (std::size_t pass = 0; pass < 10 * n; ++pass) {
    bool moved = false;
    for (VertexId v = 0; v < n; ++v) {
      state.gather(v);
      std::size_t best = state.spin(v);
      double best_dh = -1e-12;
      for (std::size_t s = 0; s < q; ++s) {
        const double dh = state.delta(v, s);
        if (dh < best_dh) {
          best_dh = dh;
          best = s;
        }
      }
      if (best != state.spin(v)) {
        state.move(v, best);
        moved = true;
      }
    }
    if (!moved) break;
  }

  return Partition::from_labels(std::span<const std::size_t>(state.spins()));
}

}  // namespace netcomm
