#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "grouptraj/database.hpp"
#include "grouptraj/dynamics.hpp"
#include "grouptraj/grouping.hpp"
#include "grouptraj/retrieval.hpp"

namespace grouptraj {

struct PredictionSettings {
  ForceParams force;
  ReconstructionMode reconstruction = ReconstructionMode::rigid;
  std::uint64_t seed = 0;
};

struct GroupPrediction {
  GroupState group;
  CandidateDestinations destinations;
  /// One rolled-out group trajectory per destination.
  std::vector<Trajectory> candidates;
  /// member_candidates[c][m]: member m reconstructed from candidate c.
  std::vector<std::vector<Trajectory>> member_candidates;
};

struct ScenePrediction {
  Frame endtime = 0;
  /// Known-window tracks of every agent present at endtime.
  std::vector<Trajectory> known;
  std::vector<GroupPrediction> groups;
};

/// Tracks present at `endtime`, cut to the known window ending there. Tracks
/// left with fewer than two points are dropped.
std::vector<Trajectory> known_window(std::span<const Trajectory> tracks, Frame endtime,
                                     const Config& cfg);

/// Database of tracks that ended before `before_frame`.
TrajectoryDatabase history_database(std::span<const Trajectory> tracks, Frame before_frame,
                                    const Config& cfg);

/// Full pipeline at one endtime: grouping, emotion, destination retrieval,
/// joint rollout per candidate and member reconstruction. Deterministic for
/// a given seed.
ScenePrediction predict_scene(std::span<const Trajectory> tracks, Frame endtime,
                              const TrajectoryDatabase& db,
                              std::shared_ptr<const SceneGeometry> scene, const Config& cfg,
                              const PredictionSettings& settings);

/// One JSON object per group.
std::string prediction_to_json_lines(const ScenePrediction& prediction);

/// One JSON object per group: members, emotion, center and offsets.
std::string groups_to_json_lines(std::span<const GroupState> groups);

/// One JSON object per group with its candidate destinations.
std::string destinations_to_json_lines(std::span<const GroupState> groups,
                                       std::span<const CandidateDestinations> destinations);

}  // namespace grouptraj
