#include "netcomm/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <queue>

#include "netcomm/error.hpp"

namespace netcomm {

namespace {

std::uint64_t pair_key(VertexId u, VertexId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

std::optional<VertexId> Graph::find(const std::string& label) const {
  if (auto it = index_.find(label); it != index_.end()) return it->second;
  return std::nullopt;
}

double Graph::weight(VertexId u, VertexId v) const {
  // Adjacency lists are sorted by neighbor id.
  const auto& adj = adjacency_.at(u);
  auto it = std::lower_bound(adj.begin(), adj.end(), v,
                             [](const Incidence& a, VertexId x) { return a.neighbor < x; });
  return (it != adj.end() && it->neighbor == v) ? it->weight : 0.0;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.labels_ != b.labels_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const Edge& x = a.edges_[i];
    const Edge& y = b.edges_[i];
    if (x.u != y.u || x.v != y.v || x.weight != y.weight || x.events != y.events) return false;
  }
  return true;
}

VertexId GraphBuilder::add_vertex(const std::string& label) {
  if (auto it = index_.find(label); it != index_.end()) return it->second;
  const VertexId id = labels_.size();
  labels_.push_back(label);
  index_.emplace(label, id);
  return id;
}

void GraphBuilder::add_edge(VertexId u, VertexId v, double weight, std::uint32_t events) {
  if (u >= labels_.size() || v >= labels_.size()) throw InputError("edge endpoint is not a declared vertex");
  if (u == v) throw InputError("self-loop on vertex '" + labels_[u] + "'");
  if (!(weight > 0.0) || !std::isfinite(weight)) throw InputError("edge weight must be positive and finite");
  const auto key = pair_key(u, v);
  if (auto it = pair_index_.find(key); it != pair_index_.end()) {
    edges_[it->second].weight += weight;
    edges_[it->second].events += events;
    return;
  }
  pair_index_.emplace(key, edges_.size());
  edges_.push_back(Edge{std::min(u, v), std::max(u, v), weight, events});
}

Graph GraphBuilder::build() && {
  Graph g;
  g.labels_ = std::move(labels_);
  g.index_ = std::move(index_);
  g.edges_ = std::move(edges_);
  std::sort(g.edges_.begin(), g.edges_.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });

  const std::size_t n = g.labels_.size();
  g.adjacency_.assign(n, {});
  g.strengths_.assign(n, 0.0);
  for (EdgeId e = 0; e < g.edges_.size(); ++e) {
    const Edge& ed = g.edges_[e];
    g.adjacency_[ed.u].push_back({ed.v, e, ed.weight});
    g.adjacency_[ed.v].push_back({ed.u, e, ed.weight});
    g.strengths_[ed.u] += ed.weight;
    g.strengths_[ed.v] += ed.weight;
    g.total_weight_ += ed.weight;
  }
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
  }
  pair_index_.clear();
  return g;
}

Graph from_edge_list(std::span<const EdgeRow> rows) {
  GraphBuilder builder;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const EdgeRow& row = rows[i];
    if (row.src == row.dst) {
      throw InputError("row " + std::to_string(i) + ": self-loop on '" + row.src + "'");
    }
    if (!(row.weight > 0.0) || !std::isfinite(row.weight)) {
      throw InputError("row " + std::to_string(i) + ": weight must be positive");
    }
    const VertexId u = builder.add_vertex(row.src);
    const VertexId v = builder.add_vertex(row.dst);
    builder.add_edge(u, v, row.weight);
  }
  return std::move(builder).build();
}

std::vector<EdgeRow> read_edge_list_tsv(std::istream& in) {
  std::vector<EdgeRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;

    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = body.find('\t', start);
      cols.push_back(trim(body.substr(start, tab == std::string_view::npos ? tab : tab - start)));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (cols.size() < 2 || cols.size() > 3) throw ParseError(lineno, "expected src<TAB>dst[<TAB>weight]");
    if (cols[0].empty() || cols[1].empty()) throw ParseError(lineno, "empty vertex label");

    EdgeRow row{std::string(cols[0]), std::string(cols[1]), 1.0};
    if (cols.size() == 3 && !cols[2].empty()) {
      const auto w = cols[2];
      auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), row.weight);
      if (ec != std::errc{} || ptr != w.data() + w.size()) {
        throw ParseError(lineno, "invalid weight '" + std::string(w) + "'");
      }
    }
    if (row.src == row.dst) throw ParseError(lineno, "self-loop on '" + row.src + "'");
    if (!(row.weight > 0.0) || !std::isfinite(row.weight)) throw ParseError(lineno, "weight must be positive");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<EdgeRow> read_edge_list_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_edge_list_tsv(in);
}

ComponentDecomposition connected_components(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<bool> seen(n, false);
  ComponentDecomposition out;
  std::queue<VertexId> queue;
  for (VertexId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<VertexId> comp;
    seen[s] = true;
    queue.push(s);
    while (!queue.empty()) {
      const VertexId v = queue.front();
      queue.pop();
      comp.push_back(v);
      for (const auto& inc : g.neighbors(v)) {
        if (!seen[inc.neighbor]) {
          seen[inc.neighbor] = true;
          queue.push(inc.neighbor);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  // Discovery order already sorts by smallest member; stable sort keeps it
  // as the tie-break.
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return out;
}

std::vector<VertexDegree> degrees(const Graph& g) {
  std::vector<VertexDegree> out(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) out[v] = {g.degree(v), g.strength(v)};
  return out;
}

std::vector<VertexId> largest_component(const Graph& g) {
  auto comps = connected_components(g);
  if (comps.empty()) return {};
  return std::move(comps.front());
}

Graph induced_subgraph(const Graph& g, std::span<const VertexId> keep) {
  GraphBuilder builder;
  std::vector<std::optional<VertexId>> remap(g.vertex_count());
  for (VertexId v : keep) remap.at(v) = builder.add_vertex(g.label(v));
  for (const Edge& e : g.edges()) {
    if (remap[e.u] && remap[e.v]) builder.add_edge(*remap[e.u], *remap[e.v], e.weight, e.events);
  }
  return std::move(builder).build();
}

}  // namespace netcomm
