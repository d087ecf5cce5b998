#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "netcomm/community.hpp"
#include "netcomm/error.hpp"
#include "netcomm/random.hpp"

namespace netcomm {

namespace {

// Generalized modularity matrix of a vertex group:
//   B(g)_ij = A_ij - s_i s_j / 2W - delta_ij * sum_{k in g} B_ik
// applied matrix-free on local indices.
class GroupModularityMatrix {
 public:
  GroupModularityMatrix(const Graph& g, const std::vector<VertexId>& group, std::vector<long>& local)
      : two_w_(2.0 * g.total_weight()), size_(group.size()) {
    for (std::size_t i = 0; i < group.size(); ++i) local[group[i]] = static_cast<long>(i);

    adj_.resize(size_);
    strength_.resize(size_);
    diag_.resize(size_);
    for (std::size_t i = 0; i < size_; ++i) {
      strength_[i] = g.strength(group[i]);
      group_strength_ += strength_[i];
    }
    for (std::size_t i = 0; i < size_; ++i) {
      double inner = 0.0;
      for (const auto& inc : g.neighbors(group[i])) {
        const long j = local[inc.neighbor];
        if (j < 0) continue;
        adj_[i].emplace_back(static_cast<std::size_t>(j), inc.weight);
        inner += inc.weight;
      }
      diag_[i] = inner - strength_[i] * group_strength_ / two_w_;
    }
    for (VertexId v : group) local[v] = -1;
  }

  std::size_t size() const { return size_; }

  double entry(std::size_t i, std::size_t j, double a_ij) const {
    return a_ij - strength_[i] * strength_[j] / two_w_ - (i == j ? diag_[i] : 0.0);
  }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    double sx = 0.0;
    for (std::size_t j = 0; j < size_; ++j) sx += strength_[j] * x[j];
    for (std::size_t i = 0; i < size_; ++i) {
      double acc = 0.0;
      for (auto [j, w] : adj_[i]) acc += w * x[j];
      y[i] = acc - strength_[i] * sx / two_w_ - diag_[i] * x[i];
    }
  }

  // Max absolute column sum (the matrix is symmetric).
  double one_norm() const {
    double best = 0.0;
    std::vector<double> a_col(size_, 0.0);
    for (std::size_t j = 0; j < size_; ++j) {
      for (auto [i, w] : adj_[j]) a_col[i] = w;
      double col = 0.0;
      for (std::size_t i = 0; i < size_; ++i) col += std::abs(entry(i, j, a_col[i]));
      for (auto [i, w] : adj_[j]) a_col[i] = 0.0;
      best = std::max(best, col);
    }
    return best;
  }

 private:
  double two_w_;
  std::size_t size_;
  double group_strength_ = 0.0;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj_;
  std::vector<double> strength_;
  std::vector<double> diag_;
};

struct Eigenpair {
  double value;
  std::vector<double> vector;  // unit L2 norm
};

// Most positive eigenpair via power iteration on B + ||B||_1 I, whose
// spectrum is non-negative so the dominant eigenvalue is B's most positive.
Eigenpair leading_eigenpair(const GroupModularityMatrix& b, const LeadingEigenvectorOptions& opts) {
  const std::size_t n = b.size();
  const double shift = b.one_norm();

  // B(g) annihilates the all-ones vector, so start from a fixed
  // pseudo-random vector instead of a uniform one.
  Rng rng(0x5eed);
  std::vector<double> x(n), y(n);
  for (auto& v : x) v = rng.uniform(0.5, 1.5) * (rng.below(2) ? 1.0 : -1.0);
  auto normalize = [](std::vector<double>& v) {
    const double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm > 0.0) {
      for (auto& e : v) e /= norm;
    }
    return norm;
  };
  normalize(x);

  double diff = 0.0;
  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    b.apply(x, y);
    for (std::size_t i = 0; i < n; ++i) y[i] += shift * x[i];
    if (normalize(y) == 0.0) return {0.0, x};
    diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(y[i] - x[i]));
    x.swap(y);
    if (diff < opts.tol) {
      b.apply(x, y);
      const double rayleigh = std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
      return {rayleigh, std::move(x)};
    }
  }
  throw ConvergenceError("leading eigenvector did not converge", diff);
}

}  // namespace

Partition leading_eigenvector(const Graph& g, const LeadingEigenvectorOptions& opts) {
  const std::size_t n = g.vertex_count();
  if (g.edge_count() == 0) return Partition::singletons(n);

  std::deque<std::vector<VertexId>> pending;
  for (auto& comp : connected_components(g)) pending.push_back(std::move(comp));
  std::vector<std::vector<VertexId>> done;
  std::vector<long> local(n, -1);
  const double four_w = 4.0 * g.total_weight();

  while (!pending.empty()) {
    std::vector<VertexId> group = std::move(pending.front());
    pending.pop_front();
    if (group.size() < 2) {
      done.push_back(std::move(group));
      continue;
    }

    const GroupModularityMatrix b(g, group, local);
    const Eigenpair lead = leading_eigenpair(b, opts);
    if (lead.value <= opts.tol) {
      done.push_back(std::move(group));
      continue;
    }

    // Entries within tolerance of zero follow the side of the group's
    // smallest vertex that has a definite sign.
    const double zero = 10.0 * opts.tol;
    bool anchor_positive = true;
    for (std::size_t i = 0; i < group.size(); ++i) {
      if (std::abs(lead.vector[i]) > zero) {
        anchor_positive = lead.vector[i] > 0.0;
        break;
      }
    }
    std::vector<double> side(group.size());
    for (std::size_t i = 0; i < group.size(); ++i) {
      const double v = lead.vector[i];
      side[i] = std::abs(v) > zero ? (v > 0.0 ? 1.0 : -1.0) : (anchor_positive ? 1.0 : -1.0);
    }

    std::vector<double> bs(group.size());
    b.apply(side, bs);
    const double delta_q = std::inner_product(side.begin(), side.end(), bs.begin(), 0.0) / four_w;

    std::vector<VertexId> pos, neg;
    for (std::size_t i = 0; i < group.size(); ++i) (side[i] > 0 ? pos : neg).push_back(group[i]);
    if (delta_q <= 1e-12 || pos.empty() || neg.empty()) {
      done.push_back(std::move(group));
      continue;
    }
    pending.push_back(std::move(pos));
    pending.push_back(std::move(neg));
  }

  std::vector<std::size_t> labels(n);
  for (std::size_t c = 0; c < done.size(); ++c) {
    for (VertexId v : done[c]) labels[v] = c;
  }
  return Partition::from_labels(std::span<const std::size_t>(labels));
}

}  // namespace netcomm
