#pragma once

#include <span>
#include <string>
#include <vector>

#include "grouptraj/geometry.hpp"
#include "grouptraj/types.hpp"

namespace grouptraj {

/// Stroke classes used in emitted figures.
enum class StrokeClass { known, predicted, ground_truth, obstacle };

const char* stroke_class_name(StrokeClass c);

/// Minimal static SVG figure in world meters (y up).
class SvgFigure {
 public:
  void add_polyline(std::span<const Vec2> points, StrokeClass cls);
  void add_trajectory(const Trajectory& traj, StrokeClass cls);
  void add_scene(const SceneGeometry& scene);

  std::string render(double width_px = 800.0) const;

 private:
  struct Polyline {
    std::vector<Vec2> points;
    StrokeClass cls;
    bool closed = false;
  };
  std::vector<Polyline> lines_;
};

}  // namespace grouptraj
