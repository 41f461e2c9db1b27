#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "grouptraj/types.hpp"

namespace grouptraj {

/// One indexed pose along a historical track.
struct DatabaseSample {
  Vec2 pos;
  /// Raw average movement direction at this step.
  Vec2 direction;
  /// `direction` normalized; zero when the agent had not moved.
  Vec2 unit_direction;
  std::uint32_t track = 0;
  /// 1-based step within the source track.
  std::uint32_t step = 0;
  /// Final point of the source track.
  Vec2 destination;

  bool moving() const noexcept { return unit_direction.x != 0.0 || unit_direction.y != 0.0; }
};

/// Historical tracks with a uniform-grid spatial index over their samples.
/// Immutable after construction; safe for concurrent readers.
class TrajectoryDatabase {
 public:
  struct CellCoord {
    std::int64_t ix = 0;
    std::int64_t iy = 0;
  };

  TrajectoryDatabase() = default;
  TrajectoryDatabase(std::vector<Trajectory> tracks, double cell_size);

  const std::vector<Trajectory>& tracks() const noexcept { return tracks_; }
  std::span<const DatabaseSample> samples() const noexcept { return samples_; }
  bool empty() const noexcept { return samples_.empty(); }

  const std::string& agent_id(const DatabaseSample& s) const { return tracks_[s.track].agent_id; }

  /// Dense rank of the sample's agent id in agent_id_less order; equal ids
  /// share a key.
  std::uint32_t agent_key(const DatabaseSample& s) const { return agent_keys_[s.track]; }

  double cell_size() const noexcept { return cell_size_; }
  CellCoord cell_of(Vec2 p) const noexcept;
  CellCoord min_cell() const noexcept { return min_cell_; }
  CellCoord max_cell() const noexcept { return max_cell_; }

  /// Sample indices stored in one cell (empty span if unoccupied).
  std::span<const std::uint32_t> cell(CellCoord c) const;

 private:
  std::vector<Trajectory> tracks_;
  std::vector<std::uint32_t> agent_keys_;
  std::vector<DatabaseSample> samples_;
  double cell_size_ = 1.0;
  // Sample indices grouped by cell; cells_ maps a cell key to its range.
  std::vector<std::uint32_t> cell_entries_;
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> cells_;
  CellCoord min_cell_;
  CellCoord max_cell_;
};

/// Indexes every point with at least two earlier points (steps t >= 3) under
/// its position and average direction. Tracks must already be resampled.
TrajectoryDatabase build_database(std::vector<Trajectory> tracks, const Config& cfg);

}  // namespace grouptraj
