#include "netcomm/layout.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "netcomm/error.hpp"
#include "netcomm/random.hpp"

namespace netcomm {

LayoutCoordinates fruchterman_reingold(const Graph& g, const LayoutOptions& opts) {
  if (opts.iterations < 1) throw InputError("layout: iterations must be at least 1");
  if (!(opts.area > 0.0)) throw InputError("layout: area must be positive");
  const std::size_t n = g.vertex_count();
  if (n == 0) return {};
  if (n == 1) return {Point{0.5, 0.5}};

  const double side = std::sqrt(opts.area);
  const double k = std::sqrt(opts.area / static_cast<double>(n));
  const double k2 = k * k;
  const double t0 = side;  // large enough to untangle interleaved clusters

  Rng rng(opts.seed);
  LayoutCoordinates pos(n);
  for (auto& p : pos) {
    p.x = rng.uniform(0.0, side);
    p.y = rng.uniform(0.0, side);
  }

  std::vector<Point> disp(n);
  for (std::size_t it = 0; it < opts.iterations; ++it) {
    const double temp = t0 * (1.0 - static_cast<double>(it) / static_cast<double>(opts.iterations));
    std::fill(disp.begin(), disp.end(), Point{});

    for (VertexId v = 0; v < n; ++v) {
      for (VertexId u = v + 1; u < n; ++u) {
        double dx = pos[v].x - pos[u].x;
        double dy = pos[v].y - pos[u].y;
        double d = std::hypot(dx, dy);
        if (d < 1e-12) {
          // Coincident: push apart along a fixed direction.
          dx = 1e-9;
          dy = 0.0;
          d = 1e-9;
        }
        const double f = k2 / d;
        disp[v].x += dx / d * f;
        disp[v].y += dy / d * f;
        disp[u].x -= dx / d * f;
        disp[u].y -= dy / d * f;
      }
    }
    for (const Edge& e : g.edges()) {
      const double dx = pos[e.u].x - pos[e.v].x;
      const double dy = pos[e.u].y - pos[e.v].y;
      const double d = std::hypot(dx, dy);
      if (d < 1e-12) continue;
      const double f = d * d / k;
      disp[e.u].x -= dx / d * f;
      disp[e.u].y -= dy / d * f;
      disp[e.v].x += dx / d * f;
      disp[e.v].y += dy / d * f;
    }
    for (VertexId v = 0; v < n; ++v) {
      const double len = std::hypot(disp[v].x, disp[v].y);
      if (len > 0.0) {
        const double step = std::min(len, temp);
        pos[v].x += disp[v].x / len * step;
        pos[v].y += disp[v].y / len * step;
      }
    }
  }

  double min_x = pos[0].x, max_x = pos[0].x, min_y = pos[0].y, max_y = pos[0].y;
  for (const auto& p : pos) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double extent = std::max(max_x - min_x, max_y - min_y);
  const double cx = (min_x + max_x) / 2.0, cy = (min_y + max_y) / 2.0;
  for (auto& p : pos) {
    if (extent > 0.0) {
      p.x = std::clamp(0.5 + (p.x - cx) / extent, 0.0, 1.0);
      p.y = std::clamp(0.5 + (p.y - cy) / extent, 0.0, 1.0);
    } else {
      p = Point{0.5, 0.5};
    }
  }
  return pos;
}

const std::vector<std::string>& palette() {
  static const std::vector<std::string> colors = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
      "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#e7ba52"};
  return colors;
}

ColorSource color_by_partition(const Partition& p) {
  ColorSource src;
  src.title = "community";
  for (std::size_t c = 0; c < p.community_count(); ++c) src.legend.push_back(std::to_string(c));
  for (CommunityId c : p.membership()) src.category.push_back(c);
  return src;
}

ColorSource color_by_membership(std::span<const std::optional<CommunityId>> membership) {
  ColorSource src;
  src.title = "community";
  CommunityId top = 0;
  bool any = false;
  for (const auto& c : membership) {
    if (c) {
      top = std::max(top, *c);
      any = true;
    }
  }
  if (any) {
    for (CommunityId c = 0; c <= top; ++c) src.legend.push_back(std::to_string(c));
  }
  src.category.assign(membership.begin(), membership.end());
  return src;
}

ColorSource color_by_attribute(const Graph& g, const AttributeTable& attrs, Characteristic c) {
  ColorSource src;
  src.title = std::string(to_string(c));
  std::map<std::string, std::size_t> index;
  std::vector<std::optional<std::string>> values(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    values[v] = attrs.value(g.label(v), c);
    if (values[v]) index.emplace(*values[v], 0);
  }
  std::size_t next = 0;
  for (auto& [value, id] : index) {
    id = next++;
    src.legend.push_back(value);
  }
  for (const auto& v : values) {
    src.category.push_back(v ? std::optional<std::size_t>(index.at(*v)) : std::nullopt);
  }
  return src;
}

std::vector<double> vertex_radii(std::span<const double> sizes, std::size_t n, const SvgOptions& opts) {
  std::vector<double> radii(n, (opts.min_radius + opts.max_radius) / 2.0);
  if (sizes.empty()) return radii;
  if (sizes.size() != n) throw InputError("size source does not cover every vertex");
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  if (!(*hi > *lo)) return radii;
  for (std::size_t v = 0; v < n; ++v) {
    radii[v] = opts.min_radius + (opts.max_radius - opts.min_radius) * (sizes[v] - *lo) / (*hi - *lo);
  }
  return radii;
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
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

void svg_header(std::ostringstream& out, double width, double height, const std::string& title) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
  if (!title.empty()) out << "<title>" << xml_escape(title) << "</title>\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" fill=\"#ffffff\"/>\n";
}

}  // namespace

std::string render_svg(const Graph& g, const LayoutCoordinates& layout, const ColorSource& colors,
                       std::span<const double> sizes, const SvgOptions& opts) {
  const std::size_t n = g.vertex_count();
  if (layout.size() != n) throw InputError("layout does not cover every vertex");
  if (colors.category.size() != n) throw InputError("colour source does not cover every vertex");
  const auto radii = vertex_radii(sizes, n, opts);

  const double plot = std::min(opts.width, opts.height) - 2.0 * opts.margin;
  auto sx = [&](double x) { return opts.margin + x * plot; };
  auto sy = [&](double y) { return opts.margin + (1.0 - y) * plot; };
  const double total_width = opts.width + opts.legend_width;

  std::ostringstream out;
  svg_header(out, total_width, opts.height, opts.title);

  double max_w = 0.0;
  for (const Edge& e : g.edges()) max_w = std::max(max_w, e.weight);
  out << "<g id=\"edges\" stroke=\"#8c8c8c\" stroke-opacity=\"0.6\">\n";
  for (const Edge& e : g.edges()) {
    out << "<line x1=\"" << num(sx(layout[e.u].x)) << "\" y1=\"" << num(sy(layout[e.u].y)) << "\" x2=\""
        << num(sx(layout[e.v].x)) << "\" y2=\"" << num(sy(layout[e.v].y)) << "\" stroke-width=\""
        << num(0.5 + 1.5 * e.weight / max_w) << "\"/>\n";
  }
  out << "</g>\n";

  const auto& pal = palette();
  auto fill = [&](std::optional<std::size_t> cat) { return cat ? pal[*cat % pal.size()] : std::string(kNullColor); };
  out << "<g id=\"vertices\" stroke=\"#333333\" stroke-width=\"0.5\">\n";
  for (VertexId v = 0; v < n; ++v) {
    out << "<circle cx=\"" << num(sx(layout[v].x)) << "\" cy=\"" << num(sy(layout[v].y)) << "\" r=\""
        << num(radii[v]) << "\" fill=\"" << fill(colors.category[v]) << "\"><title>" << xml_escape(g.label(v))
        << "</title></circle>\n";
  }
  out << "</g>\n";

  bool has_null = std::any_of(colors.category.begin(), colors.category.end(), [](auto c) { return !c; });
  out << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  const double lx = opts.width + 10.0;
  double ly = opts.margin;
  out << "<text x=\"" << num(lx) << "\" y=\"" << num(ly) << "\" font-weight=\"bold\">" << xml_escape(colors.title)
      << "</text>\n";
  auto entry = [&](const std::string& color, const std::string& text) {
    ly += 16.0;
    out << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly - 9.0) << "\" width=\"10\" height=\"10\" fill=\"" << color
        << "\"/>\n<text x=\"" << num(lx + 16.0) << "\" y=\"" << num(ly) << "\">" << xml_escape(text) << "</text>\n";
  };
  for (std::size_t i = 0; i < colors.legend.size(); ++i) entry(pal[i % pal.size()], colors.legend[i]);
  if (has_null) entry(kNullColor, "null");
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string render_size_histogram(std::span<const std::size_t> sizes, const std::string& title) {
  const double bar = 18.0, gap = 4.0, margin = 40.0, height = 300.0;
  const double width = 2.0 * margin + static_cast<double>(sizes.size()) * (bar + gap);
  std::size_t top = 1;
  for (auto s : sizes) top = std::max(top, s);

  std::ostringstream out;
  svg_header(out, std::max(width, 200.0), height + 2.0 * margin, title);
  out << "<g id=\"bars\" fill=\"" << palette()[0] << "\">\n";
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double h = height * static_cast<double>(sizes[i]) / static_cast<double>(top);
    const double x = margin + static_cast<double>(i) * (bar + gap);
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(margin + height - h) << "\" width=\"" << num(bar)
        << "\" height=\"" << num(h) << "\"><title>" << sizes[i] << "</title></rect>\n";
  }
  out << "</g>\n<g id=\"axis\" font-family=\"sans-serif\" font-size=\"10\">\n"
      << "<line x1=\"" << num(margin) << "\" y1=\"" << num(margin + height) << "\" x2=\"" << num(width - margin)
      << "\" y2=\"" << num(margin + height) << "\" stroke=\"#333333\"/>\n"
      << "<text x=\"" << num(margin) << "\" y=\"" << num(margin - 8.0) << "\">max " << top << "</text>\n"
      << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace netcomm
