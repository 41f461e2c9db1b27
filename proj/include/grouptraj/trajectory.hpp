#pragma once

#include <cstddef>

#include "grouptraj/types.hpp"

namespace grouptraj {

/// Linearly interpolates `traj` onto the global grid t = n * step_duration
/// (frame = n), covering [t_first, t_last]. Input points that already sit on
/// a grid instant are copied exactly, so resampling is idempotent.
Trajectory resample_trajectory(const Trajectory& traj, double step_duration);

/// Backward difference at `frame`; forward difference at the first point.
Vec2 velocity_at(const Trajectory& traj, Frame frame);

/// Mean displacement from every earlier point to point `step` (1-based):
///   (1/(t-1)) * sum_{k=1}^{t-1} (p_t - p_k)
/// Not normalized.
Vec2 average_direction(const Trajectory& traj, std::size_t step);

/// Mean per-step speed over the whole trajectory (m/s). Zero for < 2 points.
double mean_speed(const Trajectory& traj);

}  // namespace grouptraj
