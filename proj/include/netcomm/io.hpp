#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "netcomm/community.hpp"
#include "netcomm/graph.hpp"
#include "netcomm/ingestion.hpp"

namespace netcomm {

enum class ExportFormat { graphml, dot, json };

// Throws InputError for anything but graphml, dot, json.
ExportFormat parse_export_format(std::string_view s);

// Graph document; `membership` and `attrs` are optional and emitted per
// vertex when present.
std::string export_graph(const Graph& g, const Partition* membership, const AttributeTable* attrs,
                         ExportFormat format);

struct GraphDocument {
  Graph graph;
  std::optional<Partition> membership;
  std::optional<AttributeTable> attributes;
};

// Inverse of export_graph(..., ExportFormat::json). Throws ParseError.
GraphDocument graph_from_json(std::string_view text);
GraphDocument read_graph_json(const std::filesystem::path& path);

// RFC-4180 quoting when the field needs it.
std::string csv_field(std::string_view s);

// `id,community` with one row per vertex label, in vertex order.
std::string membership_csv(const Graph& g, const Partition& p);
std::string membership_csv(const Graph& g, std::span<const std::optional<CommunityId>> membership);

// Label -> community id as written in the file.
std::map<std::string, CommunityId> read_membership_csv(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temp file and renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace netcomm
