#ifndef THETAROUTE_SVG_HPP
#define THETAROUTE_SVG_HPP

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "thetaroute/analysis.hpp"
#include "thetaroute/geometry.hpp"
#include "thetaroute/router.hpp"

namespace thetaroute {

struct SvgOptions {
  bool show_triangles = false;
  int pixels = 800;
};

namespace detail {

inline std::string num9(double v) {
  if (v == 0) v = 0;  // no "-0.000000000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

}  // namespace detail

// y is negated so the picture has the usual orientation.
inline std::string render_svg(const std::vector<Point>& points, const std::optional<RouteTrace>& trace,
                              const SvgOptions& opt = {}) {
  using detail::num9;
  double minx = 0, maxx = 1, miny = 0, maxy = 1;
  std::vector<std::pair<double, double>> xy;
  for (const auto& p : points) xy.emplace_back(p.x.to_double(), p.y.to_double());
  if (!xy.empty()) {
    minx = maxx = xy[0].first;
    miny = maxy = xy[0].second;
    for (const auto& [x, y] : xy) {
      minx = std::min(minx, x);
      maxx = std::max(maxx, x);
      miny = std::min(miny, y);
      maxy = std::max(maxy, y);
    }
  }
  double span = std::max({maxx - minx, maxy - miny, 1e-9});
  double m = 0.05 * span;
  double vx = minx - m, vy = -(maxy + m), vw = (maxx - minx) + 2 * m, vh = (maxy - miny) + 2 * m;
  vw = std::max(vw, 2 * m);
  vh = std::max(vh, 2 * m);
  double stroke = span / 400;
  double radius = span / 250;
  int px_w = opt.pixels;
  int px_h = std::max(1, static_cast<int>(opt.pixels * vh / vw));

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px_w << "\" height=\"" << px_h
      << "\" viewBox=\"" << num9(vx) << " " << num9(vy) << " " << num9(vw) << " " << num9(vh) << "\">\n";
  out << "<rect x=\"" << num9(vx) << "\" y=\"" << num9(vy) << "\" width=\"" << num9(vw) << "\" height=\"" << num9(vh)
      << "\" fill=\"white\"/>\n";

  auto line = [&](double x1, double y1, double x2, double y2, const char* color, const char* extra) {
    out << "<line x1=\"" << num9(x1) << "\" y1=\"" << num9(-y1) << "\" x2=\"" << num9(x2) << "\" y2=\"" << num9(-y2)
        << "\" stroke=\"" << color << "\" stroke-width=\"" << num9(stroke) << "\"" << extra << "/>\n";
  };

  if (trace && trace->target < points.size()) {
    double tx = xy[trace->target].first, ty = xy[trace->target].second;
    double r = 2 * span;
    std::string dash = " stroke-dasharray=\"" + num9(4 * stroke) + " " + num9(4 * stroke) + "\"";
    line(tx - r, ty + r, tx + r, ty - r, "gray", dash.c_str());
    line(tx - r, ty - r, tx + r, ty + r, "gray", dash.c_str());
  }

  if (trace && opt.show_triangles && !trace->steps.empty()) {
    ThetaGraph shell;
    shell.points = points;
    PhaseDecomposition d = decompose_phases(*trace);
    PotentialLedger led = build_ledger(shell, *trace, d);
    Symmetry back = invert(trace->canon);
    const Point& t = points[trace->target];
    for (const auto& tri : bounding_triangles(led)) {
      out << "<polygon points=\"";
      for (std::size_t i = 0; i < 3; ++i) {
        Point p = apply_symmetry(back, tri.vertices[i]) + t;
        out << (i ? " " : "") << num9(p.x.to_double()) << "," << num9(-p.y.to_double());
      }
      out << "\" fill=\"green\" fill-opacity=\"0.15\" stroke=\"green\" stroke-width=\"" << num9(stroke) << "\"/>\n";
    }
  }

  if (trace) {
    for (const auto& s : trace->steps) {
      const auto& a = xy[s.from];
      const auto& b = xy[s.to];
      line(a.first, a.second, b.first, b.second, s.kind == StepKind::Greedy ? "blue" : "red", "");
    }
  }

  for (std::size_t i = 0; i < xy.size(); ++i) {
    const char* fill = "black";
    if (trace && i == trace->source) fill = "orange";
    if (trace && i == trace->target) fill = "purple";
    out << "<circle cx=\"" << num9(xy[i].first) << "\" cy=\"" << num9(-xy[i].second) << "\" r=\"" << num9(radius)
        << "\" fill=\"" << fill << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace thetaroute

#endif  // THETAROUTE_SVG_HPP
