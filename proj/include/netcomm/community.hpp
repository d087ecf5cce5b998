#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netcomm/graph.hpp"

namespace netcomm {

using CommunityId = std::size_t;

// Total map vertex -> community id with dense ids 0..c-1. Ids are nominal;
// the canonical form numbers communities by their smallest member vertex.
class Partition {
 public:
  Partition() = default;

  // Relabels arbitrary integer labels into canonical dense ids.
  static Partition from_labels(std::span<const std::int64_t> labels);
  static Partition from_labels(std::span<const std::size_t> labels);
  static Partition single(std::size_t n);
  static Partition singletons(std::size_t n);

  std::size_t vertex_count() const noexcept { return membership_.size(); }
  std::size_t community_count() const noexcept { return count_; }
  CommunityId operator[](VertexId v) const { return membership_.at(v); }
  const std::vector<CommunityId>& membership() const noexcept { return membership_; }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<CommunityId> membership_;
  std::size_t count_ = 0;
};

// Community sizes, descending.
std::vector<std::size_t> community_sizes(const Partition& p);

// Merge history over n leaves. Leaves are 0..n-1; merge k creates community
// n + k from two live communities.
struct Merge {
  std::size_t a;
  std::size_t b;
  double score;
};

class Dendrogram {
 public:
  explicit Dendrogram(std::size_t leaves = 0) : leaves_(leaves) {}

  // Throws InputError if either id is not live.
  std::size_t merge(std::size_t a, std::size_t b, double score);

  std::size_t leaf_count() const noexcept { return leaves_; }
  const std::vector<Merge>& merges() const noexcept { return merges_; }

  // Partition after applying the first `prefix` merges.
  Partition cut(std::size_t prefix) const;

  std::string to_json() const;

 private:
  std::size_t leaves_;
  std::vector<Merge> merges_;
  std::vector<bool> dead_;
};

// Weighted Newman modularity. Throws UndefinedError when W = 0.
double modularity(const Graph& g, const Partition& p);

// Detection result for the hierarchical algorithms.
struct Hierarchy {
  Dendrogram dendrogram;
  Partition partition;
  std::size_t cut = 0;  // number of merges applied to reach `partition`
  double modularity = 0.0;
};

// --- leading eigenvector -------------------------------------------------

struct LeadingEigenvectorOptions {
  double tol = 1e-10;
  std::size_t max_iter = 1'000'000;
};

// Recursive spectral bisection on the generalized modularity matrix, starting
// from the connected components. No Kernighan-Lin refinement.
Partition leading_eigenvector(const Graph& g, const LeadingEigenvectorOptions& opts = {});

// --- walktrap -------------------------------------------------------------

inline constexpr std::size_t kWalktrapSteps = 4;

// Agglomerates adjacent communities by the Ward-style random-walk distance
// with walks of length `steps`; the partition is the maximum-modularity cut.
Hierarchy walktrap(const Graph& g, std::size_t steps = kWalktrapSteps);

// --- edge betweenness -----------------------------------------------------

// Unweighted shortest-path edge betweenness, each unordered pair counted once,
// indexed by EdgeId.
std::vector<double> edge_betweenness_scores(const Graph& g);

// Removes the highest-betweenness edge until none remain, recording
// component splits; the partition is the maximum-modularity split state.
// Dendrogram scores are the betweenness of the edge whose removal split.
Hierarchy girvan_newman(const Graph& g);

// --- spinglass ------------------------------------------------------------

struct SpinglassOptions {
  std::size_t q_max = 25;
  double gamma = 1.0;
  double t_start = 1.0;
  double t_stop = 0.01;
  double cooling = 0.99;
  std::size_t sweeps_per_temperature = 10;
  std::uint64_t seed = 0;
};

// Potts-model energy H = -sum_{i<j} (w_ij - gamma s_i s_j / 2W) [c_i == c_j].
double spinglass_energy(const Graph& g, const Partition& p, double gamma);

// Simulated annealing on the Potts Hamiltonian with single-spin Metropolis
// updates. Throws ConnectivityError on disconnected input.
Partition spinglass(const Graph& g, const SpinglassOptions& opts);

// --- dispatch ---------------------------------------------------------------

enum class Algorithm { leading_eigenvector, walktrap, edge_betweenness, spinglass };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::leading_eigenvector, Algorithm::walktrap,
                                              Algorithm::edge_betweenness, Algorithm::spinglass};

// Short tags: lev, walktrap, eb, spinglass.
std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view s);

struct DetectionOptions {
  LeadingEigenvectorOptions lev;
  std::size_t walktrap_steps = kWalktrapSteps;
  SpinglassOptions spinglass;
};

struct Detection {
  Partition partition;
  std::optional<Dendrogram> dendrogram;
};

Detection detect(const Graph& g, Algorithm a, const DetectionOptions& opts = {});

}  // namespace netcomm
