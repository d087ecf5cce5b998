#include "netcomm/community.hpp"

namespace netcomm {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::leading_eigenvector: return "lev";
    case Algorithm::walktrap: return "walktrap";
    case Algorithm::edge_betweenness: return "eb";
    case Algorithm::spinglass: return "spinglass";
  }
  return "lev";
}

std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (Algorithm a : kAllAlgorithms) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

Detection detect(const Graph& g, Algorithm a, const DetectionOptions& opts) {
  switch (a) {
    case Algorithm::leading_eigenvector:
      return {leading_eigenvector(g, opts.lev), std::nullopt};
    case Algorithm::walktrap: {
      auto h = walktrap(g, opts.walktrap_steps);
      return {std::move(h.partition), std::move(h.dendrogram)};
    }
    case Algorithm::edge_betweenness: {
      auto h = girvan_newman(g);
      return {std::move(h.partition), std::move(h.dendrogram)};
    }
    case Algorithm::spinglass:
      return {spinglass(g, opts.spinglass), std::nullopt};
  }
  return {};
}

}  // namespace netcomm
