#include "grouptraj/database.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "grouptraj/errors.hpp"
#include "grouptraj/trajectory.hpp"

namespace grouptraj {

namespace {

std::uint64_t cell_key(TrajectoryDatabase::CellCoord c) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.ix)) << 32) |
         static_cast<std::uint32_t>(c.iy);
}

}  // namespace

TrajectoryDatabase::TrajectoryDatabase(std::vector<Trajectory> tracks, double cell_size)
    : tracks_(std::move(tracks)), cell_size_(cell_size) {
  if (!(cell_size_ > 0.0)) throw ValidationError("database cell size must be > 0");
  if (tracks_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("too many tracks for one database");
  }

  std::vector<std::uint32_t> order(tracks_.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return agent_id_less(tracks_[a].agent_id, tracks_[b].agent_id);
  });
  agent_keys_.assign(tracks_.size(), 0);
  std::uint32_t key = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && tracks_[order[i]].agent_id != tracks_[order[i - 1]].agent_id) ++key;
    agent_keys_[order[i]] = key;
  }

  for (std::uint32_t ti = 0; ti < tracks_.size(); ++ti) {
    const Trajectory& tr = tracks_[ti];
    if (tr.size() < 3) continue;
    const Vec2 dest = tr.points.back().pos;
    for (std::size_t step = 3; step <= tr.size(); ++step) {
      DatabaseSample s;
      s.pos = tr.points[step - 1].pos;
      s.direction = average_direction(tr, step);
      s.unit_direction = normalized(s.direction, 1e-9);
      s.track = ti;
      s.step = static_cast<std::uint32_t>(step);
      s.destination = dest;
      samples_.push_back(s);
    }
  }

  if (samples_.empty()) return;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed;
  keyed.reserve(samples_.size());
  min_cell_ = max_cell_ = cell_of(samples_.front().pos);
  for (std::uint32_t i = 0; i < samples_.size(); ++i) {
    const CellCoord c = cell_of(samples_[i].pos);
    min_cell_.ix = std::min(min_cell_.ix, c.ix);
    min_cell_.iy = std::min(min_cell_.iy, c.iy);
    max_cell_.ix = std::max(max_cell_.ix, c.ix);
    max_cell_.iy = std::max(max_cell_.iy, c.iy);
    keyed.emplace_back(cell_key(c), i);
  }
  std::sort(keyed.begin(), keyed.end());
  cell_entries_.reserve(keyed.size());
  for (std::size_t i = 0; i < keyed.size();) {
    std::size_t j = i;
    while (j < keyed.size() && keyed[j].first == keyed[i].first) {
      cell_entries_.push_back(keyed[j].second);
      ++j;
    }
    cells_.emplace(keyed[i].first,
                   std::make_pair(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)));
    i = j;
  }
}

TrajectoryDatabase::CellCoord TrajectoryDatabase::cell_of(Vec2 p) const noexcept {
  return {static_cast<std::int64_t>(std::floor(p.x / cell_size_)),
          static_cast<std::int64_t>(std::floor(p.y / cell_size_))};
}

std::span<const std::uint32_t> TrajectoryDatabase::cell(CellCoord c) const {
  const auto it = cells_.find(cell_key(c));
  if (it == cells_.end()) return {};
  return std::span<const std::uint32_t>(cell_entries_).subspan(it->second.first,
                                                               it->second.second - it->second.first);
}

TrajectoryDatabase build_database(std::vector<Trajectory> tracks, const Config& cfg) {
  // Half the neighborhood range keeps the first ring of cells selective.
  return TrajectoryDatabase(std::move(tracks), cfg.neighborhood_range / 2.0);
}

}  // namespace grouptraj
