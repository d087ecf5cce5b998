#include "netcomm/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "netcomm/error.hpp"

namespace netcomm {

ExportFormat parse_export_format(std::string_view s) {
  if (s == "graphml") return ExportFormat::graphml;
  if (s == "dot") return ExportFormat::dot;
  if (s == "json") return ExportFormat::json;
  throw InputError("unsupported export format '" + std::string(s) + "' (expected graphml, dot or json)");
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out + "\"";
}

// Shortest text that parses back to the same double.
std::string real(double x) { return nlohmann::json(x).dump(); }

std::string to_graphml(const Graph& g, const Partition* membership, const AttributeTable* attrs) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      << "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n";
  for (auto c : kAllCharacteristics) {
    out << "  <key id=\"" << to_string(c) << "\" for=\"node\" attr.name=\"" << to_string(c)
        << "\" attr.type=\"string\"/>\n";
  }
  out << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      << "  <key id=\"events\" for=\"edge\" attr.name=\"events\" attr.type=\"int\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    out << "    <node id=\"n" << v << "\">\n      <data key=\"label\">" << xml_escape(g.label(v)) << "</data>\n";
    if (membership) out << "      <data key=\"community\">" << (*membership)[v] << "</data>\n";
    if (attrs) {
      if (const auto* row = attrs->find(g.label(v))) {
        for (auto c : kAllCharacteristics) {
          if (const auto& val = row->get(c)) {
            out << "      <data key=\"" << to_string(c) << "\">" << xml_escape(*val) << "</data>\n";
          }
        }
      }
    }
    out << "    </node>\n";
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    out << "    <edge id=\"e" << e << "\" source=\"n" << ed.u << "\" target=\"n" << ed.v << "\">\n"
        << "      <data key=\"weight\">" << real(ed.weight) << "</data>\n"
        << "      <data key=\"events\">" << ed.events << "</data>\n    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

std::string to_dot(const Graph& g, const Partition* membership, const AttributeTable* attrs) {
  std::ostringstream out;
  out << "graph G {\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    out << "  " << v << " [label=" << dot_quote(g.label(v));
    if (membership) out << ", community=" << (*membership)[v];
    if (attrs) {
      if (const auto* row = attrs->find(g.label(v))) {
        for (auto c : kAllCharacteristics) {
          if (const auto& val = row->get(c)) out << ", " << to_string(c) << "=" << dot_quote(*val);
        }
      }
    }
    out << "];\n";
  }
  for (const Edge& e : g.edges()) {
    out << "  " << e.u << " -- " << e.v << " [weight=" << real(e.weight) << ", events=" << e.events << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_json_doc(const Graph& g, const Partition* membership, const AttributeTable* attrs) {
  nlohmann::ordered_json j;
  j["format"] = "netcomm-graph";
  j["version"] = 1;
  auto& vs = j["vertices"] = nlohmann::ordered_json::array();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    nlohmann::ordered_json jv;
    jv["id"] = v;
    jv["label"] = g.label(v);
    if (membership) jv["community"] = (*membership)[v];
    if (attrs) {
      if (const auto* row = attrs->find(g.label(v))) {
        auto& ja = jv["attributes"] = nlohmann::ordered_json::object();
        for (auto c : kAllCharacteristics) {
          const auto& val = row->get(c);
          ja[std::string(to_string(c))] = val ? nlohmann::ordered_json(*val) : nlohmann::ordered_json(nullptr);
        }
      }
    }
    vs.push_back(std::move(jv));
  }
  auto& es = j["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges()) {
    nlohmann::ordered_json je;
    je["source"] = e.u;
    je["target"] = e.v;
    je["weight"] = e.weight;
    je["events"] = e.events;
    es.push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

}  // namespace

std::string export_graph(const Graph& g, const Partition* membership, const AttributeTable* attrs,
                         ExportFormat format) {
  if (membership && membership->vertex_count() != g.vertex_count()) {
    throw InputError("membership does not cover the graph");
  }
  switch (format) {
    case ExportFormat::graphml: return to_graphml(g, membership, attrs);
    case ExportFormat::dot: return to_dot(g, membership, attrs);
    case ExportFormat::json: return to_json_doc(g, membership, attrs);
  }
  throw InputError("unsupported export format");
}

GraphDocument graph_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError(0, "graph document is not valid JSON");
  if (j.value("format", std::string{}) != "netcomm-graph") throw ParseError(0, "not a netcomm-graph document");

  GraphDocument doc;
  GraphBuilder builder;
  std::vector<std::int64_t> communities;
  bool any_community = false, any_attrs = false;
  AttributeTable attrs;
  try {
    const auto& vs = j.at("vertices");
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const auto& jv = vs[i];
      if (jv.at("id").get<std::size_t>() != i) throw ParseError(0, "vertex ids must be dense and ordered");
      const auto label = jv.at("label").get<std::string>();
      if (builder.add_vertex(label) != i) throw ParseError(0, "duplicate vertex label '" + label + "'");
      if (jv.contains("community")) {
        any_community = true;
        communities.push_back(jv["community"].get<std::int64_t>());
      } else {
        communities.push_back(-1);
      }
      if (jv.contains("attributes")) {
        any_attrs = true;
        ScholarAttributes row;
        for (auto c : kAllCharacteristics) {
          const auto key = std::string(to_string(c));
          if (jv["attributes"].contains(key) && jv["attributes"][key].is_string()) {
            row.get(c) = jv["attributes"][key].get<std::string>();
          }
        }
        attrs.insert(label, std::move(row));
      }
    }
    for (const auto& je : j.at("edges")) {
      builder.add_edge(je.at("source").get<std::size_t>(), je.at("target").get<std::size_t>(),
                       je.at("weight").get<double>(), je.value("events", std::uint32_t{1}));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("graph document: ") + e.what());
  } catch (const InputError& e) {
    throw ParseError(0, std::string("graph document: ") + e.what());
  }
  doc.graph = std::move(builder).build();
  if (any_community) {
    for (auto c : communities) {
      if (c < 0) throw ParseError(0, "graph document: community given for some vertices only");
    }
    doc.membership = Partition::from_labels(std::span<const std::int64_t>(communities));
  }
  if (any_attrs) doc.attributes = std::move(attrs);
  return doc;
}

GraphDocument read_graph_json(const std::filesystem::path& path) { return graph_from_json(read_file(path)); }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::string membership_csv(const Graph& g, const Partition& p) {
  std::vector<std::optional<CommunityId>> m(p.membership().begin(), p.membership().end());
  return membership_csv(g, m);
}

std::string membership_csv(const Graph& g, std::span<const std::optional<CommunityId>> membership) {
  std::string out = "id,community\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!membership[v]) continue;
    out += csv_field(g.label(v)) + "," + std::to_string(*membership[v]) + "\n";
  }
  return out;
}

std::map<std::string, CommunityId> read_membership_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  const auto records = read_csv(in);
  if (records.empty() || records.front().second.size() < 2 || records.front().second[0] != "id" ||
      records.front().second[1] != "community") {
    throw ParseError(1, path.string() + ": expected header 'id,community'");
  }
  std::map<std::string, CommunityId> out;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& [line, row] = records[i];
    if (row.size() != 2) throw ParseError(line, path.string() + ": expected 2 fields");
    CommunityId c = 0;
    try {
      std::size_t used = 0;
      c = std::stoull(row[1], &used);
      if (used != row[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(line, path.string() + ": invalid community id '" + row[1] + "'");
    }
    if (!out.emplace(row[0], c).second) throw ParseError(line, path.string() + ": duplicate id '" + row[0] + "'");
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

}  // namespace netcomm
