#include "netcomm/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <json.hpp>
#include <unordered_map>

#include "netcomm/error.hpp"

namespace netcomm {

namespace {

std::string trim_copy(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

PublicationRecord parse_record(const nlohmann::json& j, std::size_t lineno) {
  if (!j.is_object()) throw ParseError(lineno, "expected a JSON object");
  PublicationRecord rec;

  const auto id = j.find("id");
  if (id == j.end() || !id->is_string()) throw ParseError(lineno, "missing string field 'id'");
  rec.id = id->get<std::string>();

  const auto year = j.find("year");
  if (year == j.end() || !year->is_number_integer()) throw ParseError(lineno, "missing integer field 'year'");
  rec.year = year->get<int>();

  const auto kind = j.find("kind");
  if (kind == j.end() || !kind->is_string()) throw ParseError(lineno, "missing string field 'kind'");
  const auto parsed_kind = parse_publication_kind(kind->get<std::string>());
  if (!parsed_kind) throw ParseError(lineno, "unknown kind '" + kind->get<std::string>() + "'");
  rec.kind = *parsed_kind;

  const auto authors = j.find("authors");
  if (authors == j.end() || !authors->is_array()) throw ParseError(lineno, "missing array field 'authors'");
  for (const auto& a : *authors) {
    if (!a.is_string()) throw ParseError(lineno, "author labels must be strings");
    std::string name = normalize_author(a.get<std::string>());
    if (name.empty()) throw ParseError(lineno, "empty author label");
    if (std::find(rec.authors.begin(), rec.authors.end(), name) == rec.authors.end()) {
      rec.authors.push_back(std::move(name));
    }
  }
  if (rec.authors.empty()) throw ParseError(lineno, "empty author list");
  return rec;
}

}  // namespace

std::string normalize_author(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
  }
  return out;
}

std::optional<PublicationKind> parse_publication_kind(std::string_view s) {
  if (s == "conference") return PublicationKind::conference;
  if (s == "journal") return PublicationKind::journal;
  if (s == "chapter") return PublicationKind::chapter;
  if (s == "book") return PublicationKind::book;
  if (s == "other") return PublicationKind::other;
  return std::nullopt;
}

std::string_view to_string(PublicationKind kind) {
  switch (kind) {
    case PublicationKind::conference: return "conference";
    case PublicationKind::journal: return "journal";
    case PublicationKind::chapter: return "chapter";
    case PublicationKind::book: return "book";
    case PublicationKind::other: return "other";
  }
  return "other";
}

std::vector<PublicationRecord> parse_publications(std::istream& in) {
  std::vector<PublicationRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim_copy(line).empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw ParseError(lineno, "malformed JSON");
    out.push_back(parse_record(j, lineno));
  }
  return out;
}

std::vector<PublicationRecord> parse_publications(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_publications(in);
}

Graph build_coauthorship(std::span<const PublicationRecord> pubs) {
  GraphBuilder builder;
  std::vector<VertexId> ids;
  for (const auto& rec : pubs) {
    ids.clear();
    for (const auto& a : rec.authors) ids.push_back(builder.add_vertex(a));
    // parse_publications dedups, but records may be built by hand.
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) builder.add_edge(ids[i], ids[j], 1.0, 1);
    }
  }
  return std::move(builder).build();
}

std::string_view to_string(Characteristic c) {
  switch (c) {
    case Characteristic::department: return "department";
    case Characteristic::affiliation: return "affiliation";
    case Characteristic::origin: return "origin";
    case Characteristic::position: return "position";
  }
  return "department";
}

std::optional<Characteristic> parse_characteristic(std::string_view s) {
  for (auto c : kAllCharacteristics) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

const std::optional<std::string>& ScholarAttributes::get(Characteristic c) const {
  switch (c) {
    case Characteristic::department: return department;
    case Characteristic::affiliation: return affiliation;
    case Characteristic::origin: return origin;
    case Characteristic::position: return position;
  }
  return department;
}

std::optional<std::string>& ScholarAttributes::get(Characteristic c) {
  return const_cast<std::optional<std::string>&>(std::as_const(*this).get(c));
}

void AttributeTable::insert(std::string id, ScholarAttributes attrs) {
  auto [it, inserted] = rows_.emplace(std::move(id), std::move(attrs));
  if (!inserted) throw InputError("duplicate attribute id '" + it->first + "'");
}

const ScholarAttributes* AttributeTable::find(const std::string& id) const {
  auto it = rows_.find(id);
  return it == rows_.end() ? nullptr : &it->second;
}

std::optional<std::string> AttributeTable::value(const std::string& id, Characteristic c) const {
  const auto* row = find(id);
  return row ? row->get(c) : std::nullopt;
}

std::vector<std::pair<std::size_t, std::vector<std::string>>> read_csv(std::istream& in) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool record_started = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_record = [&] {
    fields.push_back(std::move(field));
    field.clear();
    // A lone empty field is a blank line.
    if (!(fields.size() == 1 && fields[0].empty())) records.emplace_back(record_line, std::move(fields));
    fields.clear();
    record_started = false;
  };

  char c;
  while (in.get(c)) {
    if (!record_started) {
      record_started = true;
      record_line = line;
    }
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        if (in.peek() == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) throw ParseError(record_line, "unterminated quoted field");
  if (record_started) end_record();
  return records;
}

AttributeTable load_attributes(std::istream& in) {
  const auto records = read_csv(in);
  if (records.empty()) throw ParseError(1, "missing header row");

  const auto& header = records.front().second;
  auto column = [&](std::string_view name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim_copy(header[i]) == name) return i;
    }
    throw ParseError(records.front().first, "header is missing column '" + std::string(name) + "'");
  };
  const std::size_t id_col = column("id");
  std::array<std::size_t, 4> cols{};
  for (std::size_t k = 0; k < kAllCharacteristics.size(); ++k) cols[k] = column(to_string(kAllCharacteristics[k]));

  AttributeTable table;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& [lineno, row] = records[r];
    if (row.size() != header.size()) {
      throw ParseError(lineno, "expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(row.size()));
    }
    std::string id = trim_copy(row[id_col]);
    if (id.empty()) throw ParseError(lineno, "empty id");
    ScholarAttributes attrs;
    for (std::size_t k = 0; k < kAllCharacteristics.size(); ++k) {
      std::string v = trim_copy(row[cols[k]]);
      if (!v.empty()) attrs.get(kAllCharacteristics[k]) = std::move(v);
    }
    try {
      table.insert(std::move(id), std::move(attrs));
    } catch (const InputError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return table;
}

AttributeTable load_attributes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return load_attributes(in);
}

std::vector<std::pair<std::string, std::size_t>> attribute_frequencies(const AttributeTable& t,
                                                                       Characteristic c) {
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& [id, attrs] : t.rows()) {
    if (const auto& v = attrs.get(c)) ++counts[*v];
  }
  std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return out;
}

}  // namespace netcomm
