#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace netcomm {

using VertexId = std::size_t;
using EdgeId = std::size_t;

struct Edge {
  VertexId u = 0;  // u < v
  VertexId v = 0;
  double weight = 0.0;
  // Number of input rows or publications merged into this edge.
  std::uint32_t events = 0;
};

struct Incidence {
  VertexId neighbor;
  EdgeId edge;
  double weight;
};

struct EdgeRow {
  std::string src;
  std::string dst;
  double weight = 1.0;
};

struct VertexDegree {
  std::size_t degree = 0;
  double strength = 0.0;
};

// Undirected weighted simple graph. Vertex ids are dense (0..n-1) and labels
// are unique. Immutable once built; use GraphBuilder to construct one.
class Graph {
 public:
  Graph() = default;

  std::size_t vertex_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::string& label(VertexId v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<VertexId> find(const std::string& label) const;

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  std::span<const Incidence> neighbors(VertexId v) const { return adjacency_.at(v); }

  std::size_t degree(VertexId v) const { return adjacency_.at(v).size(); }
  double strength(VertexId v) const { return strengths_.at(v); }
  // W: sum of edge weights, each edge once.
  double total_weight() const noexcept { return total_weight_; }

  // Weight of edge {u, v}, or 0 when absent.
  double weight(VertexId u, VertexId v) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  friend class GraphBuilder;

  std::vector<std::string> labels_;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<double> strengths_;
  double total_weight_ = 0.0;
};

// Accumulates vertices and edges; repeated pairs merge by summing weights.
class GraphBuilder {
 public:
  // Returns the existing id when the label was already added.
  VertexId add_vertex(const std::string& label);
  // Throws InputError on self-loops, unknown ids or non-positive weights.
  void add_edge(VertexId u, VertexId v, double weight, std::uint32_t events = 1);

  std::size_t vertex_count() const noexcept { return labels_.size(); }

  Graph build() &&;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, VertexId> index_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, EdgeId> pair_index_;
};

// Vertex ids follow first appearance; rows are validated in order and the
// first bad row is reported by its 0-based index.
Graph from_edge_list(std::span<const EdgeRow> rows);

// `src<TAB>dst[<TAB>weight]` lines; `#` comments and blank lines skipped.
std::vector<EdgeRow> read_edge_list_tsv(std::istream& in);
std::vector<EdgeRow> read_edge_list_tsv(const std::filesystem::path& path);

// Vertex sets ordered by decreasing size, then by smallest member id. Each
// set is sorted ascending.
using ComponentDecomposition = std::vector<std::vector<VertexId>>;
ComponentDecomposition connected_components(const Graph& g);

std::vector<VertexDegree> degrees(const Graph& g);

// Vertices of the largest connected component (ties: smallest vertex id);
// empty for an empty graph.
std::vector<VertexId> largest_component(const Graph& g);

// Induced subgraph on `keep` (in the given order); vertex i of the result is
// keep[i], labels and edge weights carried over.
Graph induced_subgraph(const Graph& g, std::span<const VertexId> keep);

}  // namespace netcomm
