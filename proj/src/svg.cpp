#include "grouptraj/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace grouptraj {

const char* stroke_class_name(StrokeClass c) {
  switch (c) {
    case StrokeClass::known:
      return "known";
    case StrokeClass::predicted:
      return "predicted";
    case StrokeClass::ground_truth:
      return "ground-truth";
    case StrokeClass::obstacle:
      return "obstacle";
  }
  return "unknown";
}

void SvgFigure::add_polyline(std::span<const Vec2> points, StrokeClass cls) {
  if (points.size() < 2) return;
  lines_.push_back({{points.begin(), points.end()}, cls, false});
}

void SvgFigure::add_trajectory(const Trajectory& traj, StrokeClass cls) {
  std::vector<Vec2> pts;
  pts.reserve(traj.size());
  for (const auto& p : traj.points) pts.push_back(p.pos);
  add_polyline(pts, cls);
}

void SvgFigure::add_scene(const SceneGeometry& scene) {
  for (const auto& s : scene.segments) lines_.push_back({{s.a, s.b}, StrokeClass::obstacle, false});
  for (const auto& p : scene.polygons) lines_.push_back({p.vertices, StrokeClass::obstacle, true});
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string SvgFigure::render(double width_px) const {
  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  for (const auto& l : lines_) {
    for (Vec2 p : l.points) {
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
  }
  if (lines_.empty()) min_x = min_y = 0.0, max_x = max_y = 1.0;
  const double margin = 20.0;
  const double span_x = std::max(max_x - min_x, 1e-6);
  const double span_y = std::max(max_y - min_y, 1e-6);
  const double scale = (width_px - 2 * margin) / std::max(span_x, span_y);
  const double width = span_x * scale + 2 * margin;
  const double height = span_y * scale + 2 * margin;
  auto sx = [&](double x) { return margin + (x - min_x) * scale; };
  auto sy = [&](double y) { return margin + (max_y - y) * scale; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  out += "<style>\n"
         "  polyline, polygon { fill: none; stroke-width: 1.5; }\n"
         "  .known { stroke: #2b8a3e; }\n"
         "  .predicted { stroke: #1c7ed6; stroke-dasharray: 4 2; }\n"
         "  .ground-truth { stroke: #e03131; }\n"
         "  .obstacle { stroke: #343a40; stroke-width: 3; }\n"
         "</style>\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& l : lines_) {
    out += l.closed ? "<polygon" : "<polyline";
    out += " class=\"";
    out += stroke_class_name(l.cls);
    out += "\" points=\"";
    for (std::size_t i = 0; i < l.points.size(); ++i) {
      if (i) out += ' ';
      out += num(sx(l.points[i].x)) + "," + num(sy(l.points[i].y));
    }
    out += "\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace grouptraj
