#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netcomm/graph.hpp"

namespace netcomm {

// Krackhardt connectedness: fraction of ordered vertex pairs that are
// mutually reachable. Throws UndefinedError when n < 2.
double connectedness(const Graph& g);
double connectedness_from_sizes(const std::vector<std::size_t>& component_sizes);

// Global transitivity 3*triangles / connected triples, ignoring weights.
double global_clustering(const Graph& g);
std::size_t triangle_count(const Graph& g);

// Maximal cliques with at least `min_size` vertices (Bron-Kerbosch with
// Tomita pivoting). Each clique sorted; list ordered by size desc then
// lexicographically.
std::vector<std::vector<VertexId>> maximal_cliques(const Graph& g, std::size_t min_size);

enum class ExponentMethod { loglog_ls, discrete_mle };

std::optional<ExponentMethod> parse_exponent_method(const std::string& s);
std::string to_string(ExponentMethod m);

// Power-law exponent of the degree distribution. Degree 0 is ignored. Throws
// NoFitError (an UndefinedError) when fewer than two distinct degrees remain.
double degree_exponent(const Graph& g, ExponentMethod method);
// Same, from a degree -> vertex-count histogram.
double degree_exponent(const std::map<std::size_t, std::size_t>& histogram, ExponentMethod method);

struct CentralityResult {
  std::vector<double> scores;      // per vertex, max 1 within each component
  std::vector<double> eigenvalues; // per vertex: eigenvalue of its component
  std::size_t iterations = 0;      // summed over components
};

inline constexpr double kCentralityTol = 1e-10;
inline constexpr std::size_t kCentralityMaxIter = 10'000;

// Weighted eigenvector centrality by power iteration, computed per connected
// component. Throws ConvergenceError when a component has not settled after
// max_iter steps.
CentralityResult eigenvector_centrality(const Graph& g, double tol = kCentralityTol,
                                        std::size_t max_iter = kCentralityMaxIter);

struct NetStatsReport {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::vector<std::size_t> component_sizes;
  std::optional<double> connectedness;
  std::optional<double> clustering;
  std::optional<double> gamma;
  ExponentMethod gamma_method = ExponentMethod::loglog_ls;
  std::optional<std::size_t> cliques;
  std::size_t clique_min_size = 3;
};

NetStatsReport summary(const Graph& g, ExponentMethod method = ExponentMethod::loglog_ls,
                       std::size_t clique_min_size = 3);

// Canonical JSON: fixed key order, reals rounded to 6 significant digits,
// undefined fields as null.
std::string to_json(const NetStatsReport& r);

}  // namespace netcomm
