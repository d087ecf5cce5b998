#include "netcomm/netstats.hpp"

#include <algorithm>
#include <boost/math/special_functions/zeta.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <json.hpp>
#include <numeric>

#include "netcomm/error.hpp"
#include "netcomm/json_util.hpp"

namespace netcomm {

double connectedness_from_sizes(const std::vector<std::size_t>& component_sizes) {
  const double n = static_cast<double>(
      std::accumulate(component_sizes.begin(), component_sizes.end(), std::size_t{0}));
  if (n < 2) throw UndefinedError("connectedness needs at least two vertices");
  double reachable = 0.0;
  for (auto c : component_sizes) reachable += static_cast<double>(c) * static_cast<double>(c - (c > 0));
  return reachable / (n * (n - 1.0));
}

double connectedness(const Graph& g) {
  std::vector<std::size_t> sizes;
  for (const auto& comp : connected_components(g)) sizes.push_back(comp.size());
  return connectedness_from_sizes(sizes);
}

std::size_t triangle_count(const Graph& g) {
  // Count each triangle once at its smallest vertex via sorted adjacency.
  std::size_t count = 0;
  std::vector<char> mark(g.vertex_count(), 0);
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    for (const auto& a : g.neighbors(u)) mark[a.neighbor] = 1;
    for (const auto& a : g.neighbors(u)) {
      const VertexId v = a.neighbor;
      if (v <= u) continue;
      for (const auto& b : g.neighbors(v)) {
        if (b.neighbor > v && mark[b.neighbor]) ++count;
      }
    }
    for (const auto& a : g.neighbors(u)) mark[a.neighbor] = 0;
  }
  return count;
}

double global_clustering(const Graph& g) {
  double triples = 0.0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const double k = static_cast<double>(g.degree(v));
    triples += k * (k - 1.0) / 2.0;
  }
  if (triples == 0.0) return 0.0;
  return 3.0 * static_cast<double>(triangle_count(g)) / triples;
}

namespace {

using VertexSet = std::vector<VertexId>;  // sorted

VertexSet intersect(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

struct CliqueSearch {
  const std::vector<VertexSet>& adj;
  std::size_t min_size;
  std::vector<VertexSet> found;

  void expand(VertexSet& r, VertexSet p, VertexSet x) {
    if (p.empty()) {
      if (x.empty() && r.size() >= min_size) {
        VertexSet clique = r;
        std::sort(clique.begin(), clique.end());
        found.push_back(std::move(clique));
      }
      return;
    }
    if (r.size() + p.size() < min_size) return;

    // Pivot: vertex of P u X with the most neighbours in P.
    VertexId pivot = p.front();
    std::size_t best = 0;
    for (const auto* set : {&p, &x}) {
      for (VertexId u : *set) {
        const std::size_t k = intersect(adj[u], p).size();
        if (k > best || (k == best && u < pivot)) {
          best = k;
          pivot = u;
        }
      }
    }
    VertexSet candidates;
    std::set_difference(p.begin(), p.end(), adj[pivot].begin(), adj[pivot].end(),
                        std::back_inserter(candidates));
    for (VertexId v : candidates) {
      r.push_back(v);
      expand(r, intersect(p, adj[v]), intersect(x, adj[v]));
      r.pop_back();
      p.erase(std::lower_bound(p.begin(), p.end(), v));
      x.insert(std::lower_bound(x.begin(), x.end(), v), v);
    }
  }
};

}  // namespace

std::vector<std::vector<VertexId>> maximal_cliques(const Graph& g, std::size_t min_size) {
  if (min_size < 2) throw InputError("maximal_cliques: min_size must be at least 2");
  std::vector<VertexSet> adj(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    for (const auto& inc : g.neighbors(v)) adj[v].push_back(inc.neighbor);
  }
  CliqueSearch search{adj, min_size, {}};
  VertexSet all(g.vertex_count());
  std::iota(all.begin(), all.end(), VertexId{0});
  VertexSet r;
  search.expand(r, all, {});
  std::sort(search.found.begin(), search.found.end(), [](const VertexSet& a, const VertexSet& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  return std::move(search.found);
}

std::optional<ExponentMethod> parse_exponent_method(const std::string& s) {
  if (s == "loglog-ls") return ExponentMethod::loglog_ls;
  if (s == "discrete-mle") return ExponentMethod::discrete_mle;
  return std::nullopt;
}

std::string to_string(ExponentMethod m) {
  return m == ExponentMethod::loglog_ls ? "loglog-ls" : "discrete-mle";
}

double degree_exponent(const std::map<std::size_t, std::size_t>& histogram, ExponentMethod method) {
  std::vector<std::pair<double, double>> points;  // (k, count)
  for (const auto& [k, count] : histogram) {
    if (k >= 1 && count > 0) points.emplace_back(static_cast<double>(k), static_cast<double>(count));
  }
  if (points.size() < 2) throw NoFitError("degree exponent needs at least two distinct nonzero degrees");

  if (method == ExponentMethod::loglog_ls) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [k, c] : points) {
      const double x = std::log(k), y = std::log(c);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(points.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return -slope;
  }

  // Discrete power law with k_min = 1: P(k) = k^-a / zeta(a). Maximize the
  // log-likelihood -n log zeta(a) - a * sum(log k) over a > 1.
  double n = 0.0, sum_log = 0.0;
  for (auto [k, c] : points) {
    n += c;
    sum_log += c * std::log(k);
  }
  auto neg_loglik = [&](double a) { return n * std::log(boost::math::zeta(a)) + a * sum_log; };
  const auto [alpha, value] = boost::math::tools::brent_find_minima(neg_loglik, 1.0 + 1e-9, 50.0, 50);
  (void)value;
  return alpha;
}

double degree_exponent(const Graph& g, ExponentMethod method) {
  std::map<std::size_t, std::size_t> hist;
  for (VertexId v = 0; v < g.vertex_count(); ++v) ++hist[g.degree(v)];
  return degree_exponent(hist, method);
}

CentralityResult eigenvector_centrality(const Graph& g, double tol, std::size_t max_iter) {
  CentralityResult out;
  out.scores.assign(g.vertex_count(), 0.0);
  out.eigenvalues.assign(g.vertex_count(), 0.0);

  std::vector<double> x(g.vertex_count(), 0.0), y(g.vertex_count(), 0.0);
  for (const auto& comp : connected_components(g)) {
    // An isolated vertex has no incident weight to be central through.
    if (comp.size() == 1) continue;

    // Shift by the largest weight: A + cI has the same eigenvectors, and the
    // shift breaks the +-lambda tie of bipartite components (e.g. stars).
    double shift = 0.0;
    for (VertexId v : comp) {
      for (const auto& inc : g.neighbors(v)) shift = std::max(shift, inc.weight);
    }

    for (VertexId v : comp) x[v] = 1.0;
    bool converged = false;
    double diff = 0.0;
    std::size_t it = 0;
    while (it < max_iter) {
      ++it;
      double top = 0.0;
      for (VertexId v : comp) {
        double acc = shift * x[v];
        for (const auto& inc : g.neighbors(v)) acc += inc.weight * x[inc.neighbor];
        y[v] = acc;
        top = std::max(top, acc);
      }
      diff = 0.0;
      for (VertexId v : comp) {
        y[v] /= top;
        diff = std::max(diff, std::abs(y[v] - x[v]));
        x[v] = y[v];
      }
      if (diff < tol) {
        converged = true;
        break;
      }
    }
    if (!converged) throw ConvergenceError("eigenvector centrality did not converge", diff);
    out.iterations += it;

    double num = 0.0, den = 0.0;
    for (VertexId v : comp) {
      double ax = 0.0;
      for (const auto& inc : g.neighbors(v)) ax += inc.weight * x[inc.neighbor];
      num += x[v] * ax;
      den += x[v] * x[v];
    }
    const double lambda = num / den;
    for (VertexId v : comp) {
      out.scores[v] = x[v];
      out.eigenvalues[v] = lambda;
    }
  }
  return out;
}

NetStatsReport summary(const Graph& g, ExponentMethod method, std::size_t clique_min_size) {
  NetStatsReport r;
  r.vertices = g.vertex_count();
  r.edges = g.edge_count();
  r.gamma_method = method;
  r.clique_min_size = clique_min_size;
  for (const auto& comp : connected_components(g)) r.component_sizes.push_back(comp.size());
  r.cliques = maximal_cliques(g, clique_min_size).size();
  if (r.vertices == 0) return r;

  if (r.vertices >= 2) r.connectedness = connectedness_from_sizes(r.component_sizes);
  r.clustering = global_clustering(g);
  try {
    r.gamma = degree_exponent(g, method);
  } catch (const UndefinedError&) {
  }
  return r;
}

std::string to_json(const NetStatsReport& r) {
  auto real = [](const std::optional<double>& v) -> nlohmann::ordered_json {
    if (!v || !std::isfinite(*v)) return nullptr;
    return round_sig(*v, 6);
  };
  nlohmann::ordered_json j;
  j["vertices"] = r.vertices;
  j["edges"] = r.edges;
  j["components"] = r.component_sizes;
  j["connectedness"] = real(r.connectedness);
  j["clustering_coefficient"] = real(r.clustering);
  j["gamma"] = real(r.gamma);
  j["gamma_method"] = to_string(r.gamma_method);
  j["cliques"] = r.cliques ? nlohmann::ordered_json(*r.cliques) : nlohmann::ordered_json(nullptr);
  j["clique_min_size"] = r.clique_min_size;
  return j.dump(2) + "\n";
}

}  // namespace netcomm
