#include "grouptraj/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "grouptraj/errors.hpp"
#include "grouptraj/trajectory.hpp"

namespace grouptraj {

QueryPose make_query_pose(const Trajectory& known) {
  if (known.empty()) throw TooFewPointsError("query pose needs at least one point");
  QueryPose q;
  q.pos = known.points.back().pos;
  if (known.size() >= 2) {
    q.dir = normalized(average_direction(known, known.size()), 1e-9);
    q.speed = mean_speed(known);
  }
  q.stationary = q.dir.x == 0.0 && q.dir.y == 0.0;
  return q;
}

QueryOptions QueryOptions::from_config(const Config& cfg) {
  QueryOptions o;
  o.neighborhood_range = cfg.neighborhood_range;
  o.direction_weight = cfg.direction_weight;
  o.one_per_agent = cfg.dedup_by_agent;
  return o;
}

namespace {

std::optional<double> pose_score(const DatabaseSample& s, const QueryPose& q, const QueryOptions& opts) {
  const double pos_term = distance(q.pos, s.pos) / opts.neighborhood_range;
  if (q.stationary) return pos_term;
  if (!s.moving()) return std::nullopt;
  const double c = std::clamp(dot(q.dir, s.unit_direction), -1.0, 1.0);
  if (c < 0.0) return std::nullopt;
  return pos_term + opts.direction_weight * (1.0 - c);
}

bool is_excluded(std::string_view agent, const QueryOptions& opts) {
  const auto base = base_agent_id(agent);
  return std::any_of(opts.excluded_agents.begin(), opts.excluded_agents.end(),
                     [&](const std::string& e) { return base_agent_id(e) == base; });
}

struct Ranked {
  double score;
  std::uint32_t agent;
  std::uint32_t sample;

  bool operator<(const Ranked& o) const {
    if (score != o.score) return score < o.score;
    if (agent != o.agent) return agent < o.agent;
    return sample < o.sample;
  }
};

}  // namespace

std::optional<double> similarity_score(const TrajectoryDatabase& db, const DatabaseSample& s,
                                       const QueryPose& q, const QueryOptions& opts) {
  if (is_excluded(db.agent_id(s), opts)) return std::nullopt;
  return pose_score(s, q, opts);
}

std::vector<SimilarSample> query_similar(const TrajectoryDatabase& db, const QueryPose& q,
                                         std::size_t k, const QueryOptions& opts) {
  if (k == 0 || db.empty()) return {};
  if (!(opts.neighborhood_range > 0.0)) throw ValidationError("neighborhood_range must be > 0");

  const auto& tracks = db.tracks();
  std::vector<char> excluded(tracks.size(), 0);
  if (!opts.excluded_agents.empty()) {
    for (std::size_t t = 0; t < tracks.size(); ++t) excluded[t] = is_excluded(tracks[t].agent_id, opts);
  }

  std::vector<Ranked> found;
  // Best entry per agent key when deduplicating.
  std::vector<std::int64_t> best_slot;
  if (opts.one_per_agent) best_slot.assign(tracks.size() + 1, -1);

  const auto samples = db.samples();
  auto visit = [&](TrajectoryDatabase::CellCoord c) {
    for (std::uint32_t idx : db.cell(c)) {
      const DatabaseSample& s = samples[idx];
      if (excluded[s.track]) continue;
      const auto score = pose_score(s, q, opts);
      if (!score) continue;
      const Ranked r{*score, db.agent_key(s), idx};
      if (!opts.one_per_agent) {
        found.push_back(r);
        continue;
      }
      auto& slot = best_slot[r.agent];
      if (slot < 0) {
        slot = static_cast<std::int64_t>(found.size());
        found.push_back(r);
      } else if (r < found[static_cast<std::size_t>(slot)]) {
        found[static_cast<std::size_t>(slot)] = r;
      }
    }
  };

  const auto lo = db.min_cell();
  const auto hi = db.max_cell();
  const auto c0 = db.cell_of(q.pos);
  const std::int64_t r_first =
      std::max({std::int64_t{0}, lo.ix - c0.ix, c0.ix - hi.ix, lo.iy - c0.iy, c0.iy - hi.iy});
  const std::int64_t r_last =
      std::max({std::abs(c0.ix - lo.ix), std::abs(c0.ix - hi.ix), std::abs(c0.iy - lo.iy),
                std::abs(c0.iy - hi.iy)});

  std::vector<Ranked> scratch;
  for (std::int64_t r = r_first; r <= r_last; ++r) {
    if (r == 0) {
      visit(c0);
    } else {
      const std::int64_t x0 = std::max(lo.ix, c0.ix - r);
      const std::int64_t x1 = std::min(hi.ix, c0.ix + r);
      for (const std::int64_t y : {c0.iy - r, c0.iy + r}) {
        if (y < lo.iy || y > hi.iy) continue;
        for (std::int64_t x = x0; x <= x1; ++x) visit({x, y});
      }
      const std::int64_t y0 = std::max(lo.iy, c0.iy - r + 1);
      const std::int64_t y1 = std::min(hi.iy, c0.iy + r - 1);
      for (const std::int64_t x : {c0.ix - r, c0.ix + r}) {
        if (x < lo.ix || x > hi.ix) continue;
        for (std::int64_t y = y0; y <= y1; ++y) visit({x, y});
      }
    }
    if (found.size() >= k) {
      // Samples beyond ring r are at least r whole cells away.
      const double bound = static_cast<double>(r) * db.cell_size() / opts.neighborhood_range;
      scratch = found;
      std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k - 1), scratch.end());
      if (scratch[k - 1].score < bound) break;
    }
  }

  std::sort(found.begin(), found.end());
  if (found.size() > k) found.resize(k);
  std::vector<SimilarSample> out;
  out.reserve(found.size());
  for (const auto& r : found) out.push_back({r.sample, r.score});
  return out;
}

CandidateDestinations candidate_destinations(const Trajectory& group_center,
                                             const TrajectoryDatabase& db, const Config& cfg,
                                             const QueryOptions& opts) {
  if (group_center.empty()) throw TooFewPointsError("group center trajectory is empty");
  CandidateDestinations out;
  out.pose = make_query_pose(group_center);
  out.short_history = group_center.size() < static_cast<std::size_t>(cfg.known_time_steps);

  const auto similar = query_similar(db, out.pose, static_cast<std::size_t>(cfg.k_candidates), opts);
  for (const auto& s : similar) {
    const DatabaseSample& sample = db.samples()[s.sample];
    out.destinations.push_back(sample.destination);
    out.provenance.push_back(db.agent_id(sample));
  }

  const double horizon = static_cast<double>(cfg.predict_time_steps) * cfg.step_duration;
  out.destinations.push_back(out.pose.stationary ? out.pose.pos
                                                 : out.pose.pos + out.pose.dir * (out.pose.speed * horizon));
  out.provenance.emplace_back(kLinearContinuation);
  return out;
}

}  // namespace grouptraj
