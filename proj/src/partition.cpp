#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <unordered_map>

#include "netcomm/community.hpp"
#include "netcomm/error.hpp"

namespace netcomm {

namespace {

template <typename T>
void canonical_from(std::span<const T> labels, std::vector<CommunityId>& membership,
                         std::size_t& count) {
  std::unordered_map<T, CommunityId> ids;
  membership.resize(labels.size());
  for (std::size_t v = 0; v < labels.size(); ++v) {
    auto [it, inserted] = ids.emplace(labels[v], ids.size());
    membership[v] = it->second;
  }
  count = ids.size();
}

}  // namespace

Partition Partition::from_labels(std::span<const std::int64_t> labels) {
  Partition p;
  canonical_from(labels, p.membership_, p.count_);
  return p;
}

Partition Partition::from_labels(std::span<const std::size_t> labels) {
  Partition p;
  canonical_from(labels, p.membership_, p.count_);
  return p;
}

Partition Partition::single(std::size_t n) {
  Partition p;
  p.membership_.assign(n, 0);
  p.count_ = n ? 1 : 0;
  return p;
}

Partition Partition::singletons(std::size_t n) {
  Partition p;
  p.membership_.resize(n);
  std::iota(p.membership_.begin(), p.membership_.end(), CommunityId{0});
  p.count_ = n;
  return p;
}

std::vector<std::size_t> community_sizes(const Partition& p) {
  std::vector<std::size_t> sizes(p.community_count(), 0);
  for (CommunityId c : p.membership()) ++sizes[c];
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

std::size_t Dendrogram::merge(std::size_t a, std::size_t b, double score) {
  const std::size_t next = leaves_ + merges_.size();
  if (a == b || a >= next || b >= next) throw InputError("dendrogram merge references an unknown community");
  dead_.resize(next + 1, false);
  if (dead_[a] || dead_[b]) throw InputError("dendrogram merge references a merged community");
  dead_[a] = dead_[b] = true;
  merges_.push_back({a, b, score});
  return next;
}

Partition Dendrogram::cut(std::size_t prefix) const {
  prefix = std::min(prefix, merges_.size());
  // owner[c] = leaf representing community c.
  std::vector<std::size_t> parent(leaves_);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::vector<std::size_t> owner(leaves_ + prefix);
  std::iota(owner.begin(), owner.begin() + static_cast<std::ptrdiff_t>(leaves_), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t k = 0; k < prefix; ++k) {
    const auto ra = find(owner[merges_[k].a]);
    const auto rb = find(owner[merges_[k].b]);
    parent[std::max(ra, rb)] = std::min(ra, rb);
    owner[leaves_ + k] = std::min(ra, rb);
  }
  std::vector<std::size_t> labels(leaves_);
  for (std::size_t v = 0; v < leaves_; ++v) labels[v] = find(v);
  return Partition::from_labels(std::span<const std::size_t>(labels));
}

std::string Dendrogram::to_json() const {
  nlohmann::ordered_json j;
  j["leaves"] = leaves_;
  auto& list = j["merges"] = nlohmann::ordered_json::array();
  for (const auto& m : merges_) {
    nlohmann::ordered_json e;
    e["a"] = m.a;
    e["b"] = m.b;
    e["score"] = m.score;
    list.push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

double modularity(const Graph& g, const Partition& p) {
  if (p.vertex_count() != g.vertex_count()) throw InputError("partition does not cover the graph");
  const double two_w = 2.0 * g.total_weight();
  if (two_w <= 0.0) throw UndefinedError("modularity is undefined for a graph without edges");

  // tot_c = 2 * internal + boundary, so a single community gives exactly 2W.
  std::vector<double> internal(p.community_count(), 0.0), boundary(p.community_count(), 0.0);
  for (const Edge& e : g.edges()) {
    const auto cu = p[e.u], cv = p[e.v];
    if (cu == cv) {
      internal[cu] += e.weight;
    } else {
      boundary[cu] += e.weight;
      boundary[cv] += e.weight;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < p.community_count(); ++c) {
    const double a = (2.0 * internal[c] + boundary[c]) / two_w;
    q += 2.0 * internal[c] / two_w - a * a;
  }
  return q;
}

}  // namespace netcomm
