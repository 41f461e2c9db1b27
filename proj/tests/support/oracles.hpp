#pragma once

// Brute-force reference implementations. They deliberately avoid the
// library's code paths so tests compare two independent routes.

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "grouptraj/database.hpp"
#include "grouptraj/grouping.hpp"
#include "grouptraj/retrieval.hpp"

namespace grouptraj::testing {

/// Intimacy by materializing both tracks as frame maps.
inline double brute_intimacy(const Trajectory& a, const Trajectory& b, double t1, double t2, int min_overlap) {
  std::map<Frame, Vec2> pa;
  for (const auto& p : a.points) pa[p.frame] = p.pos;
  int overlap = 0;
  double worst = -1.0;
  for (const auto& p : b.points) {
    auto it = pa.find(p.frame);
    if (it == pa.end()) continue;
    ++overlap;
    const double dx = it->second.x - p.pos.x;
    const double dy = it->second.y - p.pos.y;
    worst = std::max(worst, std::sqrt(dx * dx + dy * dy));
  }
  if (overlap < min_overlap) return 0.0;
  if (worst <= t1) return 1.0;
  if (worst <= t2) return 0.5;
  return 0.0;
}

/// Literal summation over 1-based indices.
inline Vec2 loop_average_direction(const std::vector<Vec2>& pos, std::size_t t) {
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t k = 1; k <= t - 1; ++k) {
    sx += pos[t - 1].x - pos[k - 1].x;
    sy += pos[t - 1].y - pos[k - 1].y;
  }
  return {sx / static_cast<double>(t - 1), sy / static_cast<double>(t - 1)};
}

struct OracleHit {
  std::uint32_t sample;
  double score;
};

/// Linear scan over every sample.
inline std::vector<OracleHit> exhaustive_query(const TrajectoryDatabase& db, const QueryPose& q, std::size_t k,
                                               double range, double w_dir, bool one_per_agent,
                                               const std::set<std::string>& excluded = {}) {
  struct Entry {
    double score;
    std::string agent;
    std::uint32_t sample;
  };
  std::vector<Entry> all;
  const auto samples = db.samples();
  for (std::uint32_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const std::string& agent = db.tracks()[s.track].agent_id;
    if (excluded.count(std::string(base_agent_id(agent)))) continue;
    const double d = std::hypot(q.pos.x - s.pos.x, q.pos.y - s.pos.y);
    double score = d / range;
    if (!q.stationary) {
      const double n = std::hypot(s.direction.x, s.direction.y);
      if (n <= 1e-9) continue;
      // Normalize first, then dot: mathematically tied samples (a pause
      // scales the average direction without turning it) must round alike.
      double c = q.dir.x * (s.direction.x / n) + q.dir.y * (s.direction.y / n);
      c = std::clamp(c, -1.0, 1.0);
      if (c < 0.0) continue;
      score += w_dir * (1.0 - c);
    }
    all.push_back({score, agent, i});
  }
  auto less = [](const Entry& a, const Entry& b) {
    if (a.score != b.score) return a.score < b.score;
    if (a.agent != b.agent) return agent_id_less(a.agent, b.agent);
    return a.sample < b.sample;
  };
  std::sort(all.begin(), all.end(), less);
  std::vector<OracleHit> out;
  std::set<std::string> seen;
  for (const auto& e : all) {
    if (out.size() == k) break;
    if (one_per_agent && !seen.insert(e.agent).second) continue;
    out.push_back({e.sample, e.score});
  }
  return out;
}

/// Connected components by breadth-first search, as sorted node sets.
inline std::set<std::set<std::size_t>> bfs_components(std::size_t n, const std::vector<IntimacyEdge>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<bool> seen(n, false);
  std::set<std::set<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::set<std::size_t> comp;
    std::queue<std::size_t> queue;
    queue.push(s);
    seen[s] = true;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop();
      comp.insert(u);
      for (std::size_t v : adj[u]) {
        if (!seen[v]) {
          seen[v] = true;
          queue.push(v);
        }
      }
    }
    out.insert(comp);
  }
  return out;
}

}  // namespace grouptraj::testing
