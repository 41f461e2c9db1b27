#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "grouptraj/grouping.hpp"
#include "grouptraj/types.hpp"

namespace grouptraj {

/// Social-force constants. Repulsion between bodies i and j at distance d:
///   A * exp((2r - d) / B) along (p_i - p_j) / d
/// and against the nearest obstacle point at distance d:
///   A_obs * exp((r - d) / B_obs) along the obstacle normal.
struct ForceParams {
  double relaxation_time = 0.5;
  double repulsion_strength = 2000.0;
  double repulsion_range = 0.08;
  double obstacle_strength = 2000.0;
  double obstacle_range = 0.08;
  /// max_speed = factor * desired_speed.
  double max_speed_factor = 2.0;
  double min_desired_speed = 0.3;
  double neighborhood_range = 10.0;
  double mass = 60.0;
  double radius = 0.3;
  /// Integration sub-steps per output step.
  int substeps = 8;

  static ForceParams from_config(const Config& cfg);
  void validate() const;
};

/// One simulated group.
struct Body {
  std::uint32_t id = 0;
  Vec2 pos;
  Vec2 vel;
  Vec2 dest;
  double desired_speed = 0.0;
  double max_speed = 0.0;
};

struct SimState {
  std::vector<Body> bodies;
  std::shared_ptr<const SceneGeometry> scene;
};

/// Total force on body `i`, excluding pairs at coincident positions.
Vec2 body_force(const SimState& state, std::size_t i, const ForceParams& params, double dt);

/// One semi-implicit Euler step:
///   v' = clamp(v + F/m * dt, max_speed), p' = p + v' * dt.
/// Bodies within `radius` of their destination stop in place.
SimState step(const SimState& state, const ForceParams& params, double dt);

/// params.substeps calls to step() covering dt.
SimState advance(const SimState& state, const ForceParams& params, double dt);

/// Body for a group whose known track is `center`: last position, last
/// velocity, desired speed = mean speed floored at params.min_desired_speed.
Body make_body(std::uint32_t id, const Trajectory& center, Vec2 dest, const ForceParams& params);

/// Rolls `subject` and `others` forward together and returns the subject's
/// position after each of `steps` output steps. Frames continue from
/// `last_frame`.
Trajectory predict_group_trajectory(const Body& subject, std::span<const Body> others,
                                    std::shared_ptr<const SceneGeometry> scene, int steps,
                                    Frame last_frame, const ForceParams& params, const Config& cfg);

enum class ReconstructionMode { rigid, seeded_jitter };

/// Source of the per-member deviation term.
struct ReconstructionPolicy {
  ReconstructionMode mode = ReconstructionMode::rigid;
  std::uint64_t seed = 0;
  /// Observed deviation pattern per member (rigid mode tiles it; jitter
  /// mode only uses its RMS). An empty pattern means zero deviation.
  std::vector<std::vector<Vec2>> deviations;
};

/// Member position minus (center + offset) over the center's frames.
std::vector<std::vector<Vec2>> observed_deviations(std::span<const Trajectory> members,
                                                   const Trajectory& center,
                                                   std::span<const MemberOffset> offsets);

/// P = P1 + (1 - E) * d, with P1 = group_traj + offset.
std::vector<Trajectory> reconstruct_members(const Trajectory& group_traj,
                                            std::span<const MemberOffset> offsets, double emotion,
                                            const ReconstructionPolicy& policy);

}  // namespace grouptraj
