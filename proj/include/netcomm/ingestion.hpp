#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netcomm/graph.hpp"

namespace netcomm {

enum class PublicationKind { conference, journal, chapter, book, other };

struct PublicationRecord {
  std::string id;
  int year = 0;
  PublicationKind kind = PublicationKind::other;
  std::vector<std::string> authors;  // normalized, duplicates removed, input order kept
};

// Trim, collapse internal whitespace runs to one space, ASCII case-fold.
std::string normalize_author(std::string_view raw);

std::optional<PublicationKind> parse_publication_kind(std::string_view s);
std::string_view to_string(PublicationKind kind);

// One JSON object per line: {"id", "year", "kind", "authors": [...]}. Blank
// lines are skipped. Throws ParseError naming the 1-based line.
std::vector<PublicationRecord> parse_publications(std::istream& in);
std::vector<PublicationRecord> parse_publications(const std::filesystem::path& path);

// One vertex per distinct author (first-seen order); each record adds +1 to
// every unordered author pair it contains.
Graph build_coauthorship(std::span<const PublicationRecord> pubs);

enum class Characteristic { department, affiliation, origin, position };

inline constexpr std::array<Characteristic, 4> kAllCharacteristics = {
    Characteristic::department, Characteristic::affiliation, Characteristic::origin,
    Characteristic::position};

std::string_view to_string(Characteristic c);
std::optional<Characteristic> parse_characteristic(std::string_view s);

struct ScholarAttributes {
  std::optional<std::string> department;
  std::optional<std::string> affiliation;
  std::optional<std::string> origin;
  std::optional<std::string> position;

  const std::optional<std::string>& get(Characteristic c) const;
  std::optional<std::string>& get(Characteristic c);

  friend bool operator==(const ScholarAttributes&, const ScholarAttributes&) = default;
};

// Socioacademic attributes keyed by vertex label. Missing rows read as all-null.
class AttributeTable {
 public:
  // Throws InputError on a duplicate id.
  void insert(std::string id, ScholarAttributes attrs);

  const ScholarAttributes* find(const std::string& id) const;
  std::optional<std::string> value(const std::string& id, Characteristic c) const;
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  const std::map<std::string, ScholarAttributes>& rows() const noexcept { return rows_; }

  friend bool operator==(const AttributeTable&, const AttributeTable&) = default;

 private:
  std::map<std::string, ScholarAttributes> rows_;
};

// RFC-4180 record splitter (quoted fields, doubled quotes, CRLF, embedded
// newlines). Returns the records with the 1-based line each one started on.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_csv(std::istream& in);

// Header must contain id, department, affiliation, origin, position (any
// order; extra columns ignored). Blank cells become null.
AttributeTable load_attributes(std::istream& in);
AttributeTable load_attributes(const std::filesystem::path& path);

// Non-null values with their counts, count descending then value ascending.
std::vector<std::pair<std::string, std::size_t>> attribute_frequencies(const AttributeTable& t,
                                                                       Characteristic c);

}  // namespace netcomm
