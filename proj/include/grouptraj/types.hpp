#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grouptraj/geometry.hpp"

namespace grouptraj {

using Frame = std::int64_t;

struct TrackPoint {
  Frame frame = 0;
  /// Seconds.
  double t = 0.0;
  Vec2 pos;

  friend bool operator==(const TrackPoint&, const TrackPoint&) = default;
};

struct Trajectory {
  std::string agent_id;
  std::vector<TrackPoint> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  Frame first_frame() const { return points.front().frame; }
  Frame last_frame() const { return points.back().frame; }

  /// Index of the point with this frame, if present. Points must be sorted.
  std::optional<std::size_t> index_of(Frame frame) const;

  /// Sub-trajectory with frames in [first, last].
  Trajectory slice(Frame first, Frame last) const;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Run parameters. Defaults follow the published parameter table; the
/// remaining fields are documented constants of this implementation.
struct Config {
  int known_time_steps = 30;
  int predict_time_steps = 30;
  int k_candidates = 5;
  double person_radius = 0.3;
  double step_duration = 0.3999;
  double neighborhood_range = 10.0;
  double person_mass = 60.0;
  /// Intimate-distance threshold, meters.
  double t1 = 0.45;
  /// Personal-distance threshold, meters.
  double t2 = 1.2;
  /// Co-present frames required before two agents can be intimate.
  int min_overlap = 10;
  /// Trailing known frames averaged into the group emotion.
  int emotion_frames = 5;
  /// Weight of the direction term in the retrieval score.
  double direction_weight = 1.0;
  /// Keep at most one retrieved sample per database agent.
  bool dedup_by_agent = true;

  /// Throws ValidationError on violated invariants.
  void validate() const;
};

/// Ordering used for agent ids everywhere: numeric ids compare numerically,
/// split suffixes (`7#2`) sort after their base id.
bool agent_id_less(std::string_view a, std::string_view b);

/// Strips a split suffix: `7#2` -> `7`.
std::string_view base_agent_id(std::string_view id);

/// Sorts tracks by agent id.
void sort_by_agent(std::vector<Trajectory>& tracks);

}  // namespace grouptraj
