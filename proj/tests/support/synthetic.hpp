#pragma once

#include <cstdint>
#include <vector>

#include "grouptraj/experiment.hpp"
#include "grouptraj/types.hpp"

namespace grouptraj::testing {

/// Straight-lane scene: walkers enter each lane at a fixed cadence, walk at
/// the lane's constant speed and leave at the lane end, so every walker's
/// true destination is shared with earlier walkers on the same lane.
struct LaneSceneSpec {
  int lanes = 10;
  double lane_spacing = 6.0;
  double lane_length = 80.0;
  /// Frames between consecutive walkers entering a lane.
  int cadence = 20;
  Frame last_entry = 560;
  /// Every n-th walker has a companion 0.4 m to its side (0 disables).
  int companion_every = 3;
  std::uint64_t seed = 7;
};

std::vector<Trajectory> make_lane_scene(const LaneSceneSpec& spec, const Config& cfg);

/// Endtimes used by the end-to-end benchmark on the lane scene.
std::vector<Window> lane_scene_windows();

/// Two companions walking side by side along +x for 61 frames, plus a
/// history set of walkers on the same corridor.
struct TwoWalkerFixture {
  std::vector<Trajectory> walkers;
  std::vector<Trajectory> history;
};

TwoWalkerFixture make_two_walker_fixture(const Config& cfg);

/// Straight track from `start` with constant velocity, frames [first, first+n).
Trajectory straight_track(const std::string& id, Frame first, int n, Vec2 start, Vec2 velocity, double dt);

}  // namespace grouptraj::testing
