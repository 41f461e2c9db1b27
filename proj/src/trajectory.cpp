#include "grouptraj/trajectory.hpp"

#include <cmath>
#include <string>

#include "grouptraj/errors.hpp"

namespace grouptraj {

namespace {

// Tolerance, in seconds, for treating an input time as a grid instant.
constexpr double kGridEps = 1e-9;

}  // namespace

Trajectory resample_trajectory(const Trajectory& traj, double step_duration) {
  if (traj.size() < 2) {
    throw TooFewPointsError("resample needs at least 2 points, agent '" + traj.agent_id + "' has " +
                            std::to_string(traj.size()));
  }
  if (!(step_duration > 0.0)) throw ValidationError("step_duration must be > 0");
  const auto& pts = traj.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].t > pts[i - 1].t)) {
      throw DataError("agent '" + traj.agent_id + "': point times must strictly increase");
    }
  }

  const double t0 = pts.front().t;
  const double t1 = pts.back().t;
  const auto first = static_cast<Frame>(std::ceil(t0 / step_duration - kGridEps));
  const auto last = static_cast<Frame>(std::floor(t1 / step_duration + kGridEps));

  Trajectory out{traj.agent_id, {}};
  if (last >= first) out.points.reserve(static_cast<std::size_t>(last - first + 1));
  std::size_t seg = 0;
  for (Frame n = first; n <= last; ++n) {
    const double tg = static_cast<double>(n) * step_duration;
    while (seg + 2 < pts.size() && pts[seg + 1].t < tg - kGridEps) ++seg;
    const TrackPoint& a = pts[seg];
    const TrackPoint& b = pts[seg + 1];
    Vec2 p;
    if (std::abs(a.t - tg) <= kGridEps) {
      p = a.pos;
    } else if (std::abs(b.t - tg) <= kGridEps) {
      p = b.pos;
    } else {
      const double u = (tg - a.t) / (b.t - a.t);
      p = a.pos + (b.pos - a.pos) * u;
    }
    out.points.push_back({n, tg, p});
  }
  return out;
}

Vec2 velocity_at(const Trajectory& traj, Frame frame) {
  const auto idx = traj.index_of(frame);
  if (!idx) {
    throw OutOfRangeError("frame " + std::to_string(frame) + " not in track '" + traj.agent_id + "'");
  }
  if (traj.size() < 2) {
    throw TooFewPointsError("velocity needs at least 2 points in track '" + traj.agent_id + "'");
  }
  const std::size_t i = *idx == 0 ? 1 : *idx;
  const TrackPoint& a = traj.points[i - 1];
  const TrackPoint& b = traj.points[i];
  return (b.pos - a.pos) / (b.t - a.t);
}

Vec2 average_direction(const Trajectory& traj, std::size_t step) {
  if (step < 2) {
    throw InsufficientHistoryError("average direction needs step >= 2, got " + std::to_string(step));
  }
  if (step > traj.size()) {
    throw OutOfRangeError("step " + std::to_string(step) + " beyond track of " +
                          std::to_string(traj.size()) + " points");
  }
  const Vec2 current = traj.points[step - 1].pos;
  Vec2 sum;
  for (std::size_t k = 0; k + 1 < step; ++k) sum += current - traj.points[k].pos;
  return sum / static_cast<double>(step - 1);
}

double mean_speed(const Trajectory& traj) {
  if (traj.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const auto& a = traj.points[i - 1];
    const auto& b = traj.points[i];
    total += distance(a.pos, b.pos) / (b.t - a.t);
  }
  return total / static_cast<double>(traj.size() - 1);
}

}  // namespace grouptraj
