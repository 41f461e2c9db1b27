#include "grouptraj/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "grouptraj/errors.hpp"
#include "grouptraj/trajectory.hpp"

namespace grouptraj {

namespace {

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

struct TrackExtent {
  Rect box;
  Frame first = 0;
  Frame last = -1;
};

TrackExtent extent_of(const Trajectory& t) {
  TrackExtent e;
  if (t.empty()) return e;
  e.box = {t.points.front().pos, t.points.front().pos};
  for (const auto& p : t.points) {
    e.box.min.x = std::min(e.box.min.x, p.pos.x);
    e.box.min.y = std::min(e.box.min.y, p.pos.y);
    e.box.max.x = std::max(e.box.max.x, p.pos.x);
    e.box.max.y = std::max(e.box.max.y, p.pos.y);
  }
  e.first = t.first_frame();
  e.last = t.last_frame();
  return e;
}

}  // namespace

IntimacyLevel pairwise_intimacy(const Trajectory& a, const Trajectory& b, const Config& cfg) {
  std::size_t i = 0;
  std::size_t j = 0;
  int overlap = 0;
  double max_dist = 0.0;
  while (i < a.size() && j < b.size()) {
    const Frame fa = a.points[i].frame;
    const Frame fb = b.points[j].frame;
    if (fa < fb) {
      ++i;
    } else if (fb < fa) {
      ++j;
    } else {
      ++overlap;
      max_dist = std::max(max_dist, distance(a.points[i].pos, b.points[j].pos));
      ++i;
      ++j;
    }
  }
  if (overlap < cfg.min_overlap) return IntimacyLevel::none;
  if (max_dist <= cfg.t1) return IntimacyLevel::intimate;
  if (max_dist <= cfg.t2) return IntimacyLevel::personal;
  return IntimacyLevel::none;
}

IntimacyGraph build_intimacy_graph(std::span<const Trajectory> tracks, const Config& cfg) {
  IntimacyGraph graph;
  graph.nodes.reserve(tracks.size());
  for (const auto& t : tracks) graph.nodes.push_back(t.agent_id);

  std::vector<TrackExtent> ext;
  ext.reserve(tracks.size());
  for (const auto& t : tracks) ext.push_back(extent_of(t));

  // Sweep over boxes sorted by min x; a pair whose boxes are more than t2
  // apart on either axis is farther than t2 at every co-present frame.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (!tracks[i].empty()) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ext[a].box.min.x < ext[b].box.min.x || (ext[a].box.min.x == ext[b].box.min.x && a < b);
  });

  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t i = order[oi];
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const std::size_t j = order[oj];
      if (ext[j].box.min.x - ext[i].box.max.x > cfg.t2) break;
      const double gap_y =
          std::max(ext[j].box.min.y - ext[i].box.max.y, ext[i].box.min.y - ext[j].box.max.y);
      if (gap_y > cfg.t2) continue;
      const Frame overlap = std::min(ext[i].last, ext[j].last) - std::max(ext[i].first, ext[j].first) + 1;
      if (overlap < cfg.min_overlap) continue;
      const IntimacyLevel level = pairwise_intimacy(tracks[i], tracks[j], cfg);
      if (level != IntimacyLevel::none) graph.edges.push_back({std::min(i, j), std::max(i, j), level});
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end(), [](const IntimacyEdge& x, const IntimacyEdge& y) {
    return x.a < y.a || (x.a == y.a && x.b < y.b);
  });
  return graph;
}

std::vector<std::vector<std::size_t>> extract_groups(const IntimacyGraph& graph) {
  DisjointSet sets(graph.nodes.size());
  for (const auto& e : graph.edges) {
    if (e.level != IntimacyLevel::none) sets.unite(e.a, e.b);
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> slot(graph.nodes.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (slot[root] == static_cast<std::size_t>(-1)) {
      slot[root] = groups.size();
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i);
  }
  return groups;
}

Trajectory group_center_trajectory(std::span<const Trajectory> members) {
  if (members.empty()) throw ValidationError("group center needs at least one member");
  if (members.size() == 1) return members.front();

  Trajectory center;
  for (std::size_t m = 0; m < members.size(); ++m) {
    if (m > 0) center.agent_id += '+';
    center.agent_id += members[m].agent_id;
  }
  const double n = static_cast<double>(members.size());
  for (const auto& p : members.front().points) {
    Vec2 sum = p.pos;
    bool all_present = true;
    for (std::size_t m = 1; m < members.size(); ++m) {
      const auto idx = members[m].index_of(p.frame);
      if (!idx) {
        all_present = false;
        break;
      }
      sum += members[m].points[*idx].pos;
    }
    if (all_present) center.points.push_back({p.frame, p.t, sum / n});
  }
  if (center.empty()) throw EmptyCoPresenceError("group members '" + center.agent_id + "' are never co-present");
  return center;
}

double group_emotion_from_velocities(std::span<const Vec2> velocities) {
  const std::size_t n = velocities.size();
  if (n <= 1) return 1.0;
  constexpr double kMinSpeed = 1e-6;
  double cos_sum = 0.0;
  double speed_diff_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double si = norm(velocities[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double sj = norm(velocities[j]);
      if (si >= kMinSpeed && sj >= kMinSpeed) cos_sum += dot(velocities[i], velocities[j]) / (si * sj);
      speed_diff_sum += std::abs(si - sj);
    }
  }
  const double pairs = static_cast<double>(n * (n - 1));
  const double k = 1.0 + cos_sum / pairs - speed_diff_sum / pairs - static_cast<double>(n);
  return 1.0 / (1.0 + std::exp(-k));
}

double group_emotion(std::span<const Trajectory> members, Frame frame, const Config& /*cfg*/) {
  if (members.size() <= 1) return 1.0;
  std::vector<Vec2> velocities;
  velocities.reserve(members.size());
  for (const auto& m : members) velocities.push_back(velocity_at(m, frame));
  return group_emotion_from_velocities(velocities);
}

std::vector<GroupState> build_group_states(std::span<const Trajectory> tracks,
                                           const std::vector<std::vector<std::size_t>>& groups,
                                           const Config& cfg) {
  std::vector<GroupState> states;
  states.reserve(groups.size());
  for (const auto& g : groups) {
    GroupState s;
    s.member_indices = g;
    std::vector<Trajectory> members;
    members.reserve(g.size());
    for (std::size_t idx : g) {
      members.push_back(tracks[idx]);
      s.members.push_back(tracks[idx].agent_id);
    }
    s.center = group_center_trajectory(members);

    if (members.size() > 1) {
      const std::size_t frames = std::min<std::size_t>(cfg.emotion_frames, s.center.size());
      double sum = 0.0;
      for (std::size_t f = s.center.size() - frames; f < s.center.size(); ++f) {
        sum += group_emotion(members, s.center.points[f].frame, cfg);
      }
      s.emotion = sum / static_cast<double>(frames);
    }

    const TrackPoint& anchor = s.center.points.back();
    for (const auto& m : members) {
      const auto idx = m.index_of(anchor.frame);
      s.offsets.push_back({m.agent_id, m.points[*idx].pos - anchor.pos});
    }
    states.push_back(std::move(s));
  }
  return states;
}

}  // namespace grouptraj
