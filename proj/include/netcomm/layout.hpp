#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netcomm/community.hpp"
#include "netcomm/graph.hpp"
#include "netcomm/ingestion.hpp"

namespace netcomm {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

// One position per vertex, inside the unit square.
using LayoutCoordinates = std::vector<Point>;

struct LayoutOptions {
  std::size_t iterations = 500;
  std::uint64_t seed = 0;
  double area = 1.0;
};

// Fruchterman-Reingold: attraction d^2/k along edges, repulsion k^2/d between
// all pairs, k = sqrt(area/n), displacement capped by a temperature cooling
// linearly to zero. Seeded uniform start; output scaled uniformly and
// centred in the unit square.
LayoutCoordinates fruchterman_reingold(const Graph& g, const LayoutOptions& opts);

// Categorical colouring: category index per vertex (nullopt draws the
// reserved null style) plus ordered legend entries. Palette colour is the
// category index modulo the palette size.
struct ColorSource {
  std::string title;
  std::vector<std::string> legend;
  std::vector<std::optional<std::size_t>> category;
};

ColorSource color_by_partition(const Partition& p);
// Membership that may leave some vertices out (drawn as null).
ColorSource color_by_membership(std::span<const std::optional<CommunityId>> membership);
ColorSource color_by_attribute(const Graph& g, const AttributeTable& attrs, Characteristic c);

struct SvgOptions {
  double width = 800.0;
  double height = 800.0;
  double margin = 40.0;
  double legend_width = 200.0;
  double min_radius = 3.0;
  double max_radius = 12.0;
  std::string title;
};

inline constexpr const char* kNullColor = "#d9d9d9";
const std::vector<std::string>& palette();

// Radius for each vertex: affine in `sizes` from min_radius (smallest value)
// to max_radius (largest); all equal when sizes is empty or constant.
std::vector<double> vertex_radii(std::span<const double> sizes, std::size_t n, const SvgOptions& opts);

// SVG 1.1: one <line> per edge, one <circle> per vertex, legend of <rect>
// swatches. `sizes` empty means uniform.
std::string render_svg(const Graph& g, const LayoutCoordinates& layout, const ColorSource& colors,
                       std::span<const double> sizes, const SvgOptions& opts = {});

// Bar chart of community sizes (descending).
std::string render_size_histogram(std::span<const std::size_t> sizes, const std::string& title = {});

}  // namespace netcomm
