#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>

#include "navigan/types.hpp"

namespace navigan {

// Minimal SVG scene renderer for episode visualization: target footprints
// highlighted, other agents with their trailing two states dotted, goal
// marked with a cross. Supports side-by-side panels.
struct SvgPanel {
  std::string title;
  std::vector<Vec2> target_footprints;
  std::vector<std::vector<Vec2>> other_tracks;  // full footprints per agent
  Vec2 goal = Vec2::Zero();
};

namespace detail {

struct ViewBox {
  double min_x = 0, min_y = 0, scale = 1;
  double px(double x) const { return (x - min_x) * scale + 20.0; }
  double py(double y) const { return (y - min_y) * scale + 20.0; }
};

inline ViewBox fit_view(const SvgPanel& panel, double size) {
  double lo_x = panel.goal.x(), hi_x = panel.goal.x();
  double lo_y = panel.goal.y(), hi_y = panel.goal.y();
  auto grow = [&](const Vec2& p) {
    lo_x = std::min(lo_x, p.x());
    hi_x = std::max(hi_x, p.x());
    lo_y = std::min(lo_y, p.y());
    hi_y = std::max(hi_y, p.y());
  };
  for (const auto& p : panel.target_footprints) grow(p);
  for (const auto& track : panel.other_tracks)
    for (const auto& p : track) grow(p);
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1.0});
  return {lo_x, lo_y, size / span};
}

inline void render_panel(std::ostream& out, const SvgPanel& panel, double x_offset, double size) {
  const ViewBox vb = fit_view(panel, size);
  out << "<g transform=\"translate(" << x_offset << ",0)\">\n";
  out << "<text x=\"20\" y=\"14\" font-size=\"12\">" << panel.title << "</text>\n";
  for (const auto& track : panel.other_tracks) {
    for (std::size_t i = 0; i < track.size(); ++i) {
      out << "<circle cx=\"" << vb.px(track[i].x()) << "\" cy=\"" << vb.py(track[i].y())
          << "\" r=\"2.0\" fill=\"#4477cc\"/>\n";
      if (i >= 1) {
        out << "<line x1=\"" << vb.px(track[i - 1].x()) << "\" y1=\"" << vb.py(track[i - 1].y())
            << "\" x2=\"" << vb.px(track[i].x()) << "\" y2=\"" << vb.py(track[i].y())
            << "\" stroke=\"#4477cc\" stroke-dasharray=\"2,3\" stroke-width=\"0.8\"/>\n";
      }
    }
  }
  for (std::size_t i = 0; i < panel.target_footprints.size(); ++i) {
    const auto& p = panel.target_footprints[i];
    out << "<circle cx=\"" << vb.px(p.x()) << "\" cy=\"" << vb.py(p.y())
        << "\" r=\"2.6\" fill=\"#cc3333\"/>\n";
    if (i >= 1) {
      const auto& q = panel.target_footprints[i - 1];
      out << "<line x1=\"" << vb.px(q.x()) << "\" y1=\"" << vb.py(q.y()) << "\" x2=\""
          << vb.px(p.x()) << "\" y2=\"" << vb.py(p.y())
          << "\" stroke=\"#cc3333\" stroke-dasharray=\"2,3\" stroke-width=\"1.0\"/>\n";
    }
  }
  const double gx = vb.px(panel.goal.x()), gy = vb.py(panel.goal.y());
  out << "<path d=\"M" << gx - 5 << " " << gy - 5 << " L" << gx + 5 << " " << gy + 5 << " M"
      << gx - 5 << " " << gy + 5 << " L" << gx + 5 << " " << gy - 5
      << "\" stroke=\"#cc0000\" stroke-width=\"2\"/>\n";
  out << "</g>\n";
}

}  // namespace detail

inline void write_svg(const std::filesystem::path& path, const std::vector<SvgPanel>& panels,
                      double panel_size = 420.0) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open svg for writing: " + path.string());
  const double width = panel_size * static_cast<double>(panels.size()) + 60.0;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << panel_size + 60.0 << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i)
    detail::render_panel(out, panels[i], static_cast<double>(i) * (panel_size + 30.0), panel_size);
  out << "</svg>\n";
}

}  // namespace navigan
