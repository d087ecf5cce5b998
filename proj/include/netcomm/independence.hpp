#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "netcomm/community.hpp"
#include "netcomm/graph.hpp"
#include "netcomm/ingestion.hpp"

namespace netcomm {

// Attribute values (rows) by community ids (columns). Only rows and columns
// with at least one observation are kept.
struct ContingencyTable {
  std::vector<std::string> row_labels;  // ascending
  std::vector<CommunityId> col_labels;  // ascending
  std::vector<std::size_t> counts;      // row-major, rows x cols
  std::size_t nulls_excluded = 0;

  std::size_t rows() const noexcept { return row_labels.size(); }
  std::size_t cols() const noexcept { return col_labels.size(); }
  std::size_t at(std::size_t r, std::size_t c) const { return counts.at(r * cols() + c); }
  std::size_t total() const noexcept;
  std::vector<std::size_t> row_margins() const;
  std::vector<std::size_t> col_margins() const;

  // Builds a table from explicit counts (labels "r0".. and 0..).
  static ContingencyTable from_counts(const std::vector<std::vector<std::size_t>>& counts);
};

// One (value, community) observation per entry; nullopt values are excluded
// and counted, nullopt communities (vertex not in the partition) are skipped
// silently. Throws EmptyTableError when nothing is left.
ContingencyTable contingency_table(std::span<const std::optional<std::string>> values,
                                   std::span<const std::optional<CommunityId>> communities);

ContingencyTable contingency_table(const Graph& g, const Partition& p, const AttributeTable& attrs,
                                   Characteristic c);

// Pearson's sum (O - E)^2 / E. Throws ShapeError unless rows >= 2, cols >= 2
// and total > 0.
double chi_square_statistic(const ContingencyTable& t);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t df = 0;  // (r-1)(c-1); informational only
  std::size_t replicates = 0;
  double p_value = 1.0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultReplicates = 2000;
inline constexpr double kSignificance = 0.05;

struct MonteCarloOptions {
  std::size_t replicates = kDefaultReplicates;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  // Called with every simulated table's counts (row-major). Forces a single
  // thread.
  std::function<void(std::size_t replicate, const std::vector<std::size_t>& counts)> observer;
};

// Monte Carlo p-value: each replicate uniformly permutes the attribute
// labels against the community labels (both margins fixed) and recomputes
// the statistic; p = (1 + #{sim >= observed}) / (1 + B). Replicate r draws
// from its own substream of `seed`, so the result does not depend on the
// thread count.
ChiSquareResult monte_carlo_p(const ContingencyTable& t, const MonteCarloOptions& opts);
ChiSquareResult monte_carlo_p(const ContingencyTable& t, std::size_t replicates, std::uint64_t seed);

// --- report ------------------------------------------------------------------

// One column of the report: a membership over the graph's vertices.
struct MembershipColumn {
  std::string name;
  std::vector<std::optional<CommunityId>> membership;  // nullopt = vertex left out
  std::size_t excluded_vertices = 0;
  std::optional<std::string> error;                     // set when detection failed
};

struct ReportCell {
  std::string column;
  std::variant<ChiSquareResult, std::string> outcome;  // result or error message
  std::size_t nulls_excluded = 0;
  std::size_t excluded_vertices = 0;
};

struct ReportRow {
  Characteristic characteristic;
  std::size_t null_values = 0;  // over all graph vertices
  std::vector<ReportCell> cells;
};

struct IndependenceReport {
  std::vector<std::string> columns;
  std::vector<ReportRow> rows;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;

  // {characteristic: {algorithm: {statistic, df, B, p, seed, nulls_excluded}}}
  std::string to_json() const;
  // Fixed-width grid: characteristic, null values, one p-value per column.
  std::string to_grid() const;
};

// Per-cell failures are recorded in the cell and never abort the report.
IndependenceReport report_from_memberships(const Graph& g, const AttributeTable& attrs,
                                           std::span<const MembershipColumn> columns,
                                           std::span<const Characteristic> characteristics,
                                           const MonteCarloOptions& mc);

// Runs the requested detections, then report_from_memberships. Spinglass is
// run on the largest connected component; the number of vertices left out
// is recorded in its cells.
IndependenceReport independence_report(const Graph& g, const AttributeTable& attrs,
                                       std::span<const Algorithm> algorithms,
                                       std::span<const Characteristic> characteristics,
                                       const MonteCarloOptions& mc,
                                       const DetectionOptions& detection = {});

// Membership over g from a partition of an induced subgraph on `kept`.
MembershipColumn lift_membership(std::string name, std::size_t vertex_count,
                                 std::span<const VertexId> kept, const Partition& sub);

}  // namespace netcomm
