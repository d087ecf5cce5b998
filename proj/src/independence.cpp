#include "netcomm/independence.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "netcomm/error.hpp"
#include "netcomm/json_util.hpp"
#include "netcomm/random.hpp"

namespace netcomm {

std::size_t ContingencyTable::total() const noexcept {
  std::size_t s = 0;
  for (auto c : counts) s += c;
  return s;
}

std::vector<std::size_t> ContingencyTable::row_margins() const {
  std::vector<std::size_t> out(rows(), 0);
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < cols(); ++c) out[r] += at(r, c);
  }
  return out;
}

std::vector<std::size_t> ContingencyTable::col_margins() const {
  std::vector<std::size_t> out(cols(), 0);
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < cols(); ++c) out[c] += at(r, c);
  }
  return out;
}

ContingencyTable ContingencyTable::from_counts(const std::vector<std::vector<std::size_t>>& counts) {
  ContingencyTable t;
  const std::size_t cols = counts.empty() ? 0 : counts.front().size();
  for (std::size_t r = 0; r < counts.size(); ++r) {
    if (counts[r].size() != cols) throw ShapeError("ragged contingency table");
    t.row_labels.push_back("r" + std::to_string(r));
    t.counts.insert(t.counts.end(), counts[r].begin(), counts[r].end());
  }
  for (std::size_t c = 0; c < cols; ++c) t.col_labels.push_back(c);
  return t;
}

ContingencyTable contingency_table(std::span<const std::optional<std::string>> values,
                                   std::span<const std::optional<CommunityId>> communities) {
  if (values.size() != communities.size()) throw InputError("values and memberships differ in length");
  ContingencyTable t;
  std::map<std::string, std::map<CommunityId, std::size_t>> cells;
  std::vector<CommunityId> cols;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!communities[i]) continue;
    if (!values[i]) {
      ++t.nulls_excluded;
      continue;
    }
    ++cells[*values[i]][*communities[i]];
    cols.push_back(*communities[i]);
  }
  if (cells.empty()) throw EmptyTableError("no non-null attribute values to tabulate");
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  t.col_labels = cols;
  for (const auto& [value, row] : cells) {
    t.row_labels.push_back(value);
    for (CommunityId c : cols) {
      auto it = row.find(c);
      t.counts.push_back(it == row.end() ? 0 : it->second);
    }
  }
  return t;
}

ContingencyTable contingency_table(const Graph& g, const Partition& p, const AttributeTable& attrs,
                                   Characteristic c) {
  if (p.vertex_count() != g.vertex_count()) throw InputError("partition does not cover the graph");
  std::vector<std::optional<std::string>> values(g.vertex_count());
  std::vector<std::optional<CommunityId>> comms(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    values[v] = attrs.value(g.label(v), c);
    comms[v] = p[v];
  }
  return contingency_table(values, comms);
}

namespace {

// Expected counts and the statistic for fixed margins.
class ChiSquare {
 public:
  ChiSquare(std::span<const std::size_t> row_margins, std::span<const std::size_t> col_margins)
      : cols_(col_margins.size()) {
    double total = 0.0;
    for (auto r : row_margins) total += static_cast<double>(r);
    expected_.reserve(row_margins.size() * cols_);
    for (auto r : row_margins) {
      for (auto c : col_margins) expected_.push_back(static_cast<double>(r) * static_cast<double>(c) / total);
    }
  }

  double operator()(std::span<const std::size_t> counts) const {
    double stat = 0.0;
    for (std::size_t i = 0; i < expected_.size(); ++i) {
      const double d = static_cast<double>(counts[i]) - expected_[i];
      stat += d * d / expected_[i];
    }
    return stat;
  }

 private:
  std::size_t cols_;
  std::vector<double> expected_;
};

void check_shape(const ContingencyTable& t) {
  if (t.rows() < 2 || t.cols() < 2 || t.total() == 0) {
    throw ShapeError("chi-squared needs at least 2 rows and 2 columns with observations (got " +
                     std::to_string(t.rows()) + "x" + std::to_string(t.cols()) + ")");
  }
  if (t.counts.size() != t.rows() * t.cols()) throw ShapeError("counts do not match the table shape");
  for (auto m : t.row_margins()) {
    if (m == 0) throw ShapeError("empty row in contingency table");
  }
  for (auto m : t.col_margins()) {
    if (m == 0) throw ShapeError("empty column in contingency table");
  }
}

}  // namespace

double chi_square_statistic(const ContingencyTable& t) {
  check_shape(t);
  const auto rm = t.row_margins();
  const auto cm = t.col_margins();
  return ChiSquare(rm, cm)(t.counts);
}

ChiSquareResult monte_carlo_p(const ContingencyTable& t, const MonteCarloOptions& opts) {
  if (opts.replicates < 99) throw InputError("Monte Carlo test needs at least 99 replicates");
  check_shape(t);
  const auto rm = t.row_margins();
  const auto cm = t.col_margins();
  const ChiSquare chi(rm, cm);
  const double observed = chi(t.counts);
  // Same tie allowance as R's chisq.test(simulate.p.value = TRUE).
  const double threshold = observed * (1.0 - 64.0 * std::numeric_limits<double>::epsilon());

  // One unit per observation: its row and its column.
  std::vector<std::uint32_t> unit_rows, unit_cols;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) {
      for (std::size_t k = 0; k < t.at(r, c); ++k) {
        unit_rows.push_back(static_cast<std::uint32_t>(r));
        unit_cols.push_back(static_cast<std::uint32_t>(c));
      }
    }
  }

  auto run = [&](std::size_t first, std::size_t last) {
    std::vector<std::uint32_t> rows;
    std::vector<std::size_t> counts(t.counts.size());
    std::size_t at_least = 0;
    for (std::size_t rep = first; rep < last; ++rep) {
      rows = unit_rows;
      Rng rng(substream_seed(opts.seed, rep));
      rng.shuffle(std::span<std::uint32_t>(rows));
      std::fill(counts.begin(), counts.end(), 0);
      for (std::size_t i = 0; i < rows.size(); ++i) ++counts[rows[i] * t.cols() + unit_cols[i]];
      if (opts.observer) opts.observer(rep, counts);
      if (chi(counts) >= threshold) ++at_least;
    }
    return at_least;
  };

  std::size_t at_least = 0;
  const std::size_t threads = opts.observer ? 1 : std::max<std::size_t>(1, std::min(opts.threads, opts.replicates));
  if (threads == 1) {
    at_least = run(0, opts.replicates);
  } else {
    std::vector<std::size_t> partial(threads, 0);
    {
      std::vector<std::jthread> pool;
      for (std::size_t k = 0; k < threads; ++k) {
        const std::size_t first = opts.replicates * k / threads;
        const std::size_t last = opts.replicates * (k + 1) / threads;
        pool.emplace_back([&, k, first, last] { partial[k] = run(first, last); });
      }
    }
    for (auto p : partial) at_least += p;
  }

  ChiSquareResult res;
  res.statistic = observed;
  res.df = (t.rows() - 1) * (t.cols() - 1);
  res.replicates = opts.replicates;
  res.p_value = (1.0 + static_cast<double>(at_least)) / (1.0 + static_cast<double>(opts.replicates));
  res.seed = opts.seed;
  return res;
}

ChiSquareResult monte_carlo_p(const ContingencyTable& t, std::size_t replicates, std::uint64_t seed) {
  MonteCarloOptions opts;
  opts.replicates = replicates;
  opts.seed = seed;
  return monte_carlo_p(t, opts);
}

MembershipColumn lift_membership(std::string name, std::size_t vertex_count,
                                 std::span<const VertexId> kept, const Partition& sub) {
  MembershipColumn col;
  col.name = std::move(name);
  col.membership.assign(vertex_count, std::nullopt);
  for (std::size_t i = 0; i < kept.size(); ++i) col.membership.at(kept[i]) = sub[i];
  col.excluded_vertices = vertex_count - kept.size();
  return col;
}

IndependenceReport report_from_memberships(const Graph& g, const AttributeTable& attrs,
                                           std::span<const MembershipColumn> columns,
                                           std::span<const Characteristic> characteristics,
                                           const MonteCarloOptions& mc) {
  IndependenceReport report;
  report.replicates = mc.replicates;
  report.seed = mc.seed;
  for (const auto& col : columns) report.columns.push_back(col.name);

  for (Characteristic ch : characteristics) {
    ReportRow row{ch, 0, {}};
    std::vector<std::optional<std::string>> values(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      values[v] = attrs.value(g.label(v), ch);
      if (!values[v]) ++row.null_values;
    }
    for (const auto& col : columns) {
      ReportCell cell{col.name, std::string{}, 0, col.excluded_vertices};
      if (col.error) {
        cell.outcome = *col.error;
      } else {
        try {
          const auto table = contingency_table(values, col.membership);
          cell.nulls_excluded = table.nulls_excluded;
          cell.outcome = monte_carlo_p(table, mc);
        } catch (const Error& e) {
          cell.outcome = std::string(e.what());
        }
      }
      row.cells.push_back(std::move(cell));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

IndependenceReport independence_report(const Graph& g, const AttributeTable& attrs,
                                       std::span<const Algorithm> algorithms,
                                       std::span<const Characteristic> characteristics,
                                       const MonteCarloOptions& mc, const DetectionOptions& detection) {
  std::vector<MembershipColumn> columns;
  for (Algorithm a : algorithms) {
    const std::string name(to_string(a));
    try {
      if (a == Algorithm::spinglass) {
        const auto kept = largest_component(g);
        const Graph sub = induced_subgraph(g, kept);
        columns.push_back(lift_membership(name, g.vertex_count(), kept, spinglass(sub, detection.spinglass)));
      } else {
        const auto det = detect(g, a, detection);
        std::vector<VertexId> all(g.vertex_count());
        for (VertexId v = 0; v < all.size(); ++v) all[v] = v;
        columns.push_back(lift_membership(name, g.vertex_count(), all, det.partition));
      }
    } catch (const Error& e) {
      MembershipColumn failed;
      failed.name = name;
      failed.error = e.what();
      columns.push_back(std::move(failed));
    }
  }
  return report_from_memberships(g, attrs, columns, characteristics, mc);
}

std::string IndependenceReport::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& row : rows) {
    auto& jr = j[std::string(to_string(row.characteristic))];
    jr = nlohmann::ordered_json::object();
    for (const auto& cell : row.cells) {
      nlohmann::ordered_json jc;
      if (const auto* res = std::get_if<ChiSquareResult>(&cell.outcome)) {
        jc["statistic"] = round_sig(res->statistic, 10);
        jc["df"] = res->df;
        jc["B"] = res->replicates;
        jc["p"] = round_sig(res->p_value, 10);
        jc["seed"] = res->seed;
        jc["nulls_excluded"] = cell.nulls_excluded;
      } else {
        jc["error"] = std::get<std::string>(cell.outcome);
      }
      if (cell.excluded_vertices > 0) jc["excluded_vertices"] = cell.excluded_vertices;
      jr[cell.column] = std::move(jc);
    }
  }
  return j.dump(2) + "\n";
}

std::string IndependenceReport::to_grid() const {
  std::ostringstream out;
  out << std::left << std::setw(16) << "characteristic" << std::setw(8) << "nulls";
  for (const auto& c : columns) out << std::setw(12) << c;
  out << "\n";

  std::vector<std::string> notes;
  for (const auto& row : rows) {
    out << std::setw(16) << to_string(row.characteristic) << std::setw(8) << row.null_values;
    for (const auto& cell : row.cells) {
      std::ostringstream v;
      if (const auto* res = std::get_if<ChiSquareResult>(&cell.outcome)) {
        v << std::fixed << std::setprecision(4) << res->p_value;
        if (res->p_value <= kSignificance) v << "*";
      } else {
        v << "error[" << notes.size() + 1 << "]";
        notes.push_back(std::string(to_string(row.characteristic)) + "/" + cell.column + ": " +
                        std::get<std::string>(cell.outcome));
      }
      out << std::setw(12) << v.str();
    }
    out << "\n";
  }
  out << "B = " << replicates << ", seed = " << seed << "; * marks p <= " << kSignificance << "\n";
  if (!rows.empty()) {
    for (const auto& cell : rows.front().cells) {
      if (cell.excluded_vertices > 0) {
        out << cell.column << ": " << cell.excluded_vertices << " vertices outside the analysed component\n";
      }
    }
  }
  for (std::size_t i = 0; i < notes.size(); ++i) out << "[" << i + 1 << "] " << notes[i] << "\n";
  return out.str();
}

}  // namespace netcomm
