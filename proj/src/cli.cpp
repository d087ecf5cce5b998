#include "netcomm/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "netcomm/community.hpp"
#include "netcomm/error.hpp"
#include "netcomm/graph.hpp"
#include "netcomm/independence.hpp"
#include "netcomm/ingestion.hpp"
#include "netcomm/io.hpp"
#include "netcomm/layout.hpp"
#include "netcomm/netstats.hpp"

#ifndef NETCOMM_VERSION
#define NETCOMM_VERSION "unknown"
#endif

namespace netcomm::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256: init failed");
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

std::size_t thread_budget() {
  if (const char* env = std::getenv("NETCOMM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Thrown for flag combinations CLI11 cannot express; exit code 2.
class UsageError : public InputError {
 public:
  using InputError::InputError;
};

// --- run manifest -------------------------------------------------------------

struct Manifest {
  std::string command;
  std::vector<std::string> args;
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  ojson parameters = ojson::object();
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Effective value of every option of the subcommand, defaults included.
ojson collect_parameters(const CLI::App& sub) {
  ojson params = ojson::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string key = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (key == "help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (opt->get_type_size() == 0) {
        params[key] = true;
      } else if (res.size() == 1 && opt->get_expected_max() <= 1) {
        params[key] = res.front();
      } else {
        params[key] = res;
      }
    } else if (!opt->get_default_str().empty()) {
      params[key] = opt->get_default_str();
    } else if (opt->get_type_size() == 0) {
      params[key] = false;
    }
  }
  return params;
}

void write_manifest(const fs::path& primary, const Manifest& m) {
  ojson j;
  j["tool"] = "netcomm";
  j["version"] = NETCOMM_VERSION;
  j["command"] = m.command;
  j["args"] = m.args;
  j["working_directory"] = fs::current_path().string();
  j["inputs"] = ojson::array();
  for (const auto& p : m.inputs) j["inputs"].push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  j["seeds"] = ojson::object();
  if (m.parameters.contains("seed")) j["seeds"]["seed"] = m.parameters["seed"];
  j["parameters"] = m.parameters;
  j["outputs"] = ojson::array();
  for (const auto& p : m.outputs) j["outputs"].push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  j["timestamp"] = utc_timestamp();
  write_file_atomic(fs::path(primary.string() + ".manifest.json"), j.dump(2) + "\n");
}

// --- shared input handling ------------------------------------------------------

Graph load_graph(const fs::path& path, Manifest& m) {
  m.inputs.push_back(path);
  return read_graph_json(path).graph;
}

AttributeTable load_attrs(const fs::path& path, const Graph& g, Manifest& m) {
  m.inputs.push_back(path);
  AttributeTable t = load_attributes(path);
  std::vector<std::string> unknown;
  for (const auto& [id, row] : t.rows()) {
    if (!g.find(id)) unknown.push_back(id);
  }
  if (!unknown.empty()) {
    std::string msg = path.string() + ": ids not in the graph:";
    for (std::size_t i = 0; i < unknown.size() && i < 10; ++i) msg += " " + unknown[i];
    if (unknown.size() > 10) msg += " (+" + std::to_string(unknown.size() - 10) + " more)";
    throw InputError(msg);
  }
  return t;
}

std::vector<std::optional<CommunityId>> load_membership(const fs::path& path, const Graph& g, Manifest& m) {
  m.inputs.push_back(path);
  const auto rows = read_membership_csv(path);
  std::vector<std::optional<CommunityId>> out(g.vertex_count());
  std::vector<std::string> unknown;
  for (const auto& [label, c] : rows) {
    if (const auto v = g.find(label)) {
      out[*v] = c;
    } else {
      unknown.push_back(label);
    }
  }
  if (!unknown.empty()) {
    std::string msg = path.string() + ": labels not in the graph:";
    for (std::size_t i = 0; i < unknown.size() && i < 10; ++i) msg += " " + unknown[i];
    if (unknown.size() > 10) msg += " (+" + std::to_string(unknown.size() - 10) + " more)";
    throw InputError(msg);
  }
  return out;
}

// Dense canonical partition from a total membership.
Partition total_partition(const std::vector<std::optional<CommunityId>>& m, const fs::path& path) {
  std::vector<std::size_t> labels;
  labels.reserve(m.size());
  for (const auto& c : m) {
    if (!c) throw InputError(path.string() + ": membership does not cover every vertex");
    labels.push_back(*c);
  }
  return Partition::from_labels(std::span<const std::size_t>(labels));
}

void finish(const fs::path& primary, Manifest& m) { write_manifest(primary, m); }

// --- commands --------------------------------------------------------------------

struct BuildCmd {
  std::string pubs, edges, out;

  void setup(CLI::App& app) {
    auto* p = app.add_option("--pubs", pubs, "publication records, one JSON object per line")->check(CLI::ExistingFile);
    auto* e = app.add_option("--edges", edges, "tab-separated edge list: src dst [weight]")->check(CLI::ExistingFile);
    p->excludes(e);
    app.add_option("--out", out, "graph JSON to write")->required();
  }

  int run(Manifest& m, std::ostream& os) {
    if (pubs.empty() == edges.empty()) throw UsageError("build: give exactly one of --pubs or --edges");
    Graph g;
    if (!pubs.empty()) {
      m.inputs.push_back(pubs);
      const auto records = parse_publications(fs::path(pubs));
      g = build_coauthorship(records);
    } else {
      m.inputs.push_back(edges);
      const auto rows = read_edge_list_tsv(fs::path(edges));
      g = from_edge_list(rows);
    }
    write_file_atomic(out, export_graph(g, nullptr, nullptr, ExportFormat::json));
    m.outputs.push_back(out);
    finish(out, m);
    os << g.vertex_count() << " vertices, " << g.edge_count() << " edges\n";
    return kOk;
  }
};

struct StatsCmd {
  std::string graph, out, method = "loglog-ls", centrality;
  std::size_t clique_min = 3;

  void setup(CLI::App& app) {
    app.add_option("graph", graph, "graph JSON")->required()->check(CLI::ExistingFile);
    app.add_option("--gamma-method", method, "degree exponent fit: loglog-ls or discrete-mle")
        ->check(CLI::IsMember({"loglog-ls", "discrete-mle"}))
        ->capture_default_str();
    app.add_option("--clique-min", clique_min, "smallest clique size counted")->capture_default_str();
    app.add_option("--out", out, "write the JSON report here instead of stdout");
    app.add_option("--centrality", centrality, "also write id,centrality CSV");
  }

  int run(Manifest& m, std::ostream& os) {
    const Graph g = load_graph(graph, m);
    const auto report = summary(g, *parse_exponent_method(method), clique_min);
    const std::string text = to_json(report);
    if (!centrality.empty()) {
      const auto c = eigenvector_centrality(g);
      std::ostringstream csv;
      csv << "id,centrality\n";
      for (VertexId v = 0; v < g.vertex_count(); ++v) {
        csv << csv_field(g.label(v)) << "," << std::setprecision(10) << c.scores[v] << "\n";
      }
      write_file_atomic(centrality, csv.str());
      m.outputs.push_back(centrality);
    }
    if (out.empty()) {
      os << text;
    } else {
      write_file_atomic(out, text);
      m.outputs.insert(m.outputs.begin(), out);
      finish(out, m);
    }
    return kOk;
  }
};

struct DetectCmd {
  std::string graph, algo, out, dendrogram;
  std::optional<std::uint64_t> seed;
  bool largest = false;
  DetectionOptions opts;

  void setup(CLI::App& app) {
    app.add_option("graph", graph, "graph JSON")->required()->check(CLI::ExistingFile);
    app.add_option("--algo", algo, "lev, walktrap, eb or spinglass")
        ->required()
        ->check(CLI::IsMember({"lev", "walktrap", "eb", "spinglass"}));
    app.add_option("--out", out, "membership CSV to write")->required();
    app.add_option("--seed", seed, "random seed (required for spinglass)");
    app.add_flag("--largest-component", largest, "analyse only the largest connected component");
    app.add_option("--dendrogram", dendrogram, "write the merge hierarchy (walktrap, eb) as JSON");
    app.add_option("--steps", opts.walktrap_steps, "walktrap walk length")->capture_default_str();
    app.add_option("--lev-tol", opts.lev.tol, "leading eigenvector tolerance")->capture_default_str();
    app.add_option("--lev-max-iter", opts.lev.max_iter, "leading eigenvector iteration cap")->capture_default_str();
    app.add_option("--q-max", opts.spinglass.q_max, "spinglass spin states")->capture_default_str();
    app.add_option("--gamma", opts.spinglass.gamma, "spinglass resolution")->capture_default_str();
    app.add_option("--t-start", opts.spinglass.t_start, "spinglass start temperature")->capture_default_str();
    app.add_option("--t-stop", opts.spinglass.t_stop, "spinglass stop temperature")->capture_default_str();
    app.add_option("--cooling", opts.spinglass.cooling, "spinglass cooling factor")->capture_default_str();
    app.add_option("--sweeps", opts.spinglass.sweeps_per_temperature, "spinglass sweeps per temperature")
        ->capture_default_str();
  }

  int run(Manifest& m, std::ostream& os) {
    const Algorithm a = *parse_algorithm(algo);
    if (a == Algorithm::spinglass && !seed) throw UsageError("detect: --seed is required for spinglass");
    if (seed) opts.spinglass.seed = *seed;
    if (!dendrogram.empty() && a != Algorithm::walktrap && a != Algorithm::edge_betweenness) {
      throw UsageError("detect: --dendrogram needs --algo walktrap or eb");
    }

    const Graph g = load_graph(graph, m);
    std::vector<VertexId> kept(g.vertex_count());
    for (VertexId v = 0; v < kept.size(); ++v) kept[v] = v;
    if (largest) kept = largest_component(g);
    const Graph analysed = largest ? induced_subgraph(g, kept) : Graph(g);

    Detection d;
    try {
      d = detect(analysed, a, opts);
    } catch (const ConnectivityError&) {
      throw ConnectivityError("spinglass requires a connected network; rerun with --largest-component");
    }
    const auto col = lift_membership(algo, g.vertex_count(), kept, d.partition);
    write_file_atomic(out, membership_csv(g, std::span<const std::optional<CommunityId>>(col.membership)));
    m.outputs.push_back(out);

    if (!dendrogram.empty() && d.dendrogram) {
      ojson j;
      j["labels"] = ojson::array();
      for (VertexId v = 0; v < analysed.vertex_count(); ++v) j["labels"].push_back(analysed.label(v));
      const auto tree = ojson::parse(d.dendrogram->to_json());
      j["leaves"] = tree["leaves"];
      j["merges"] = tree["merges"];
      write_file_atomic(dendrogram, j.dump(2) + "\n");
      m.outputs.push_back(dendrogram);
    }
    finish(out, m);

    if (largest) {
      os << "largest component: " << kept.size() << " of " << g.vertex_count() << " vertices; "
         << g.vertex_count() - kept.size() << " excluded\n";
    }
    os << d.partition.community_count() << " communities";
    if (analysed.total_weight() > 0.0) {
      os << ", modularity " << std::setprecision(6) << modularity(analysed, d.partition);
    }
    os << "\n";
    return kOk;
  }
};

struct ChisqCmd {
  std::string graph, attrs, out, grid;
  std::vector<std::string> memberships;
  std::vector<std::string> characteristics;
  std::size_t replicates = kDefaultReplicates;
  std::optional<std::uint64_t> seed;

  void setup(CLI::App& app) {
    app.add_option("graph", graph, "graph JSON")->required()->check(CLI::ExistingFile);
    app.add_option("--membership", memberships, "membership CSV, optionally NAME=FILE")->required();
    app.add_option("--attrs", attrs, "scholar attribute CSV")->required()->check(CLI::ExistingFile);
    app.add_option("--characteristic", characteristics, "department, affiliation, origin, position (default all)")
        ->check(CLI::IsMember({"department", "affiliation", "origin", "position"}));
    app.add_option("--replicates", replicates, "Monte Carlo replicates")->capture_default_str();
    app.add_option("--seed", seed, "random seed")->required();
    app.add_option("--out", out, "report JSON to write")->required();
    app.add_option("--grid", grid, "also write the text grid here");
  }

  int run(Manifest& m, std::ostream& os) {
    const Graph g = load_graph(graph, m);
    const AttributeTable table = load_attrs(attrs, g, m);

    std::vector<MembershipColumn> columns;
    for (const auto& spec : memberships) {
      const auto eq = spec.find('=');
      const fs::path file = eq == std::string::npos ? spec : spec.substr(eq + 1);
      std::string name = eq == std::string::npos ? file.stem().string() : spec.substr(0, eq);
      if (name.empty()) throw UsageError("chisq: empty column name in --membership " + spec);
      MembershipColumn col;
      col.name = std::move(name);
      col.membership = load_membership(file, g, m);
      col.excluded_vertices = static_cast<std::size_t>(
          std::count(col.membership.begin(), col.membership.end(), std::nullopt));
      columns.push_back(std::move(col));
    }

    std::vector<Characteristic> chars;
    for (const auto& c : characteristics) chars.push_back(*parse_characteristic(c));
    if (chars.empty()) chars.assign(kAllCharacteristics.begin(), kAllCharacteristics.end());

    MonteCarloOptions mc;
    mc.replicates = replicates;
    mc.seed = *seed;
    mc.threads = thread_budget();
    const auto report = report_from_memberships(g, table, columns, chars, mc);

    write_file_atomic(out, report.to_json());
    m.outputs.push_back(out);
    const std::string text = report.to_grid();
    if (!grid.empty()) {
      write_file_atomic(grid, text);
      m.outputs.push_back(grid);
    }
    finish(out, m);
    os << text;
    return kOk;
  }
};

struct LayoutCmd {
  std::string graph, out, membership, attrs, color_by, size_by = "uniform", title;
  std::optional<std::uint64_t> seed;
  std::optional<CommunityId> community;
  LayoutOptions opts;

  void setup(CLI::App& app) {
    app.add_option("graph", graph, "graph JSON")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out, "SVG to write")->required();
    app.add_option("--seed", seed, "random seed")->required();
    app.add_option("--iterations", opts.iterations, "layout iterations")->capture_default_str();
    app.add_option("--membership", membership, "membership CSV")->check(CLI::ExistingFile);
    app.add_option("--attrs", attrs, "scholar attribute CSV")->check(CLI::ExistingFile);
    app.add_option("--color-by", color_by, "membership, department, affiliation, origin or position")
        ->check(CLI::IsMember({"membership", "department", "affiliation", "origin", "position"}));
    app.add_option("--size-by", size_by, "centrality or uniform")
        ->check(CLI::IsMember({"centrality", "uniform"}))
        ->capture_default_str();
    app.add_option("--community", community, "draw only this community (needs --membership)");
    app.add_option("--title", title, "figure title");
  }

  int run(Manifest& m, std::ostream& os) {
    if (color_by == "membership" && membership.empty()) throw UsageError("layout: --color-by membership needs --membership");
    if (!color_by.empty() && color_by != "membership" && attrs.empty()) {
      throw UsageError("layout: --color-by " + color_by + " needs --attrs");
    }
    if (community && membership.empty()) throw UsageError("layout: --community needs --membership");
    opts.seed = *seed;

    const Graph full = load_graph(graph, m);
    std::vector<std::optional<CommunityId>> member;
    if (!membership.empty()) member = load_membership(membership, full, m);
    std::optional<AttributeTable> table;
    if (!attrs.empty()) table = load_attrs(attrs, full, m);

    std::vector<VertexId> keep;
    for (VertexId v = 0; v < full.vertex_count(); ++v) {
      if (!community || member[v] == community) keep.push_back(v);
    }
    if (community && keep.empty()) throw InputError("layout: no vertex in community " + std::to_string(*community));
    const Graph g = community ? induced_subgraph(full, keep) : full;

    ColorSource colors;
    if (color_by == "membership") {
      std::vector<std::optional<CommunityId>> sub;
      for (auto v : keep) sub.push_back(member[v]);
      colors = color_by_membership(sub);
    } else if (!color_by.empty()) {
      colors = color_by_attribute(g, *table, *parse_characteristic(color_by));
    } else {
      colors = color_by_partition(Partition::single(g.vertex_count()));
      colors.legend = {"vertex"};
    }

    std::vector<double> sizes;
    if (size_by == "centrality") sizes = eigenvector_centrality(g).scores;

    SvgOptions so;
    so.title = title;
    const auto xy = fruchterman_reingold(g, opts);
    write_file_atomic(out, render_svg(g, xy, colors, sizes, so));
    m.outputs.push_back(out);
    finish(out, m);
    os << g.vertex_count() << " vertices drawn\n";
    return kOk;
  }
};

struct SizesCmd {
  std::string membership, csv, svg, title;

  void setup(CLI::App& app) {
    app.add_option("membership", membership, "membership CSV")->required()->check(CLI::ExistingFile);
    app.add_option("--csv", csv, "write community,size CSV");
    app.add_option("--svg", svg, "write a bar chart");
    app.add_option("--title", title, "chart title");
  }

  int run(Manifest& m, std::ostream& os) {
    if (csv.empty() && svg.empty()) throw UsageError("sizes: give --csv and/or --svg");
    m.inputs.push_back(membership);
    std::map<CommunityId, std::size_t> count;
    for (const auto& [label, c] : read_membership_csv(membership)) ++count[c];
    std::vector<std::pair<CommunityId, std::size_t>> rows(count.begin(), count.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

    std::vector<std::size_t> sizes;
    std::ostringstream text;
    text << "community,size\n";
    for (const auto& [c, s] : rows) {
      text << c << "," << s << "\n";
      sizes.push_back(s);
    }
    if (!csv.empty()) {
      write_file_atomic(csv, text.str());
      m.outputs.push_back(csv);
    }
    if (!svg.empty()) {
      write_file_atomic(svg, render_size_histogram(sizes, title));
      m.outputs.push_back(svg);
    }
    finish(m.outputs.front(), m);
    os << rows.size() << " communities\n";
    return kOk;
  }
};

struct ExportCmd {
  std::string graph, format, membership, attrs, out;

  void setup(CLI::App& app) {
    app.add_option("graph", graph, "graph JSON")->required()->check(CLI::ExistingFile);
    app.add_option("--format", format, "graphml, dot or json")->required();
    app.add_option("--membership", membership, "membership CSV covering every vertex")->check(CLI::ExistingFile);
    app.add_option("--attrs", attrs, "scholar attribute CSV")->check(CLI::ExistingFile);
    app.add_option("--out", out, "file to write")->required();
  }

  int run(Manifest& m, std::ostream&) {
    const ExportFormat f = parse_export_format(format);
    const Graph g = load_graph(graph, m);
    std::optional<Partition> p;
    if (!membership.empty()) p = total_partition(load_membership(membership, g, m), membership);
    std::optional<AttributeTable> table;
    if (!attrs.empty()) table = load_attrs(attrs, g, m);
    write_file_atomic(out, export_graph(g, p ? &*p : nullptr, table ? &*table : nullptr, f));
    m.outputs.push_back(out);
    finish(out, m);
    return kOk;
  }
};

int run_replay(const fs::path& manifest_path, bool check_only, std::ostream& out, std::ostream& err);

struct ReplayCmd {
  std::string manifest;
  bool check = false;

  void setup(CLI::App& app) {
    app.add_option("manifest", manifest, "run manifest (.manifest.json)")->required()->check(CLI::ExistingFile);
    app.add_flag("--check", check, "only verify input digests");
  }
};

int report_error(std::ostream& err, const std::string& what, int code) {
  err << "netcomm: " << what << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coauthorship network analysis: communities, statistics and figures", "netcomm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NETCOMM_VERSION);

  BuildCmd build;
  StatsCmd stats;
  DetectCmd det;
  ChisqCmd chisq;
  LayoutCmd layout;
  SizesCmd sizes;
  ExportCmd exp;
  ReplayCmd replay;
  auto* s_build = app.add_subcommand("build", "build a coauthorship graph from publications or an edge list");
  auto* s_stats = app.add_subcommand("stats", "network statistics report");
  auto* s_detect = app.add_subcommand("detect", "community detection");
  auto* s_chisq = app.add_subcommand("chisq", "chi-square independence of communities and attributes");
  auto* s_layout = app.add_subcommand("layout", "force-directed layout rendered as SVG");
  auto* s_sizes = app.add_subcommand("sizes", "community size table and histogram");
  auto* s_export = app.add_subcommand("export", "export a graph as graphml, dot or json");
  auto* s_replay = app.add_subcommand("replay", "re-run a command from its manifest");
  build.setup(*s_build);
  stats.setup(*s_stats);
  det.setup(*s_detect);
  chisq.setup(*s_chisq);
  layout.setup(*s_layout);
  sizes.setup(*s_sizes);
  exp.setup(*s_export);
  replay.setup(*s_replay);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  Manifest m;
  m.command = sub->get_name();
  m.args = args;
  m.parameters = collect_parameters(*sub);

  try {
    if (sub == s_build) return build.run(m, out);
    if (sub == s_stats) return stats.run(m, out);
    if (sub == s_detect) return det.run(m, out);
    if (sub == s_chisq) return chisq.run(m, out);
    if (sub == s_layout) return layout.run(m, out);
    if (sub == s_sizes) return sizes.run(m, out);
    if (sub == s_export) return exp.run(m, out);
    return run_replay(replay.manifest, replay.check, out, err);
  } catch (const ConnectivityError& e) {
    return report_error(err, e.what(), kPrecondition);
  } catch (const ConvergenceError& e) {
    return report_error(err, e.what(), kPrecondition);
  } catch (const UndefinedError& e) {
    return report_error(err, e.what(), kPrecondition);
  } catch (const Error& e) {
    return report_error(err, e.what(), kUsage);
  } catch (const fs::filesystem_error& e) {
    return report_error(err, e.what(), kUsage);
  } catch (const nlohmann::json::exception& e) {
    return report_error(err, e.what(), kUsage);
  }
}

namespace {

int run_replay(const fs::path& manifest_path, bool check_only, std::ostream& out, std::ostream& err) {
  ojson j;
  try {
    j = ojson::parse(read_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, manifest_path.string() + ": " + e.what());
  }
  if (!j.contains("args") || !j["args"].is_array()) throw ParseError(0, manifest_path.string() + ": no args");
  const std::vector<std::string> args = j["args"].get<std::vector<std::string>>();
  if (!args.empty() && args.front() == "replay") throw UsageError("replay: manifest records a replay");
  const fs::path dir = j.value("working_directory", fs::current_path().string());

  // Paths in the manifest are relative to the directory it was made in.
  const fs::path here = fs::current_path();
  struct Restore {
    fs::path dir;
    ~Restore() { fs::current_path(dir); }
  } restore{here};
  fs::current_path(dir);

  std::vector<std::string> changed;
  for (const auto& in : j.value("inputs", ojson::array())) {
    const fs::path p = in.at("path").get<std::string>();
    if (!fs::exists(p) || sha256_file(p) != in.at("sha256").get<std::string>()) changed.push_back(p.string());
  }
  if (!changed.empty()) {
    std::string msg = "replay: inputs changed since the run:";
    for (const auto& c : changed) msg += " " + c;
    throw InputError(msg);
  }
  if (check_only) {
    out << "inputs match\n";
    return kOk;
  }

  const int code = run(args, out, err);
  if (code != kOk) return code;
  for (const auto& o : j.value("outputs", ojson::array())) {
    const fs::path p = o.at("path").get<std::string>();
    if (sha256_file(p) != o.at("sha256").get<std::string>()) changed.push_back(p.string());
  }
  if (!changed.empty()) {
    err << "netcomm: replay produced different output:";
    for (const auto& c : changed) err << " " << c;
    err << "\n";
    return 1;
  }
  out << "reproduced " << j.value("outputs", ojson::array()).size() << " output(s)\n";
  return kOk;
}

}  // namespace

}  // namespace netcomm::cli
