#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "grouptraj/types.hpp"

namespace grouptraj {

/// Three-valued pairwise intimacy.
enum class IntimacyLevel { none, personal, intimate };

constexpr double intimacy_value(IntimacyLevel level) noexcept {
  switch (level) {
    case IntimacyLevel::intimate:
      return 1.0;
    case IntimacyLevel::personal:
      return 0.5;
    case IntimacyLevel::none:
      break;
  }
  return 0.0;
}

struct IntimacyEdge {
  /// Node indices, a < b.
  std::size_t a = 0;
  std::size_t b = 0;
  IntimacyLevel level = IntimacyLevel::none;

  friend bool operator==(const IntimacyEdge&, const IntimacyEdge&) = default;
};

/// Undirected graph over agents. Only positive-intimacy edges are stored,
/// sorted by (a, b).
struct IntimacyGraph {
  std::vector<std::string> nodes;
  std::vector<IntimacyEdge> edges;
};

/// Maximum inter-agent distance over co-present frames, thresholded by
/// cfg.t1 / cfg.t2. Fewer than cfg.min_overlap co-present frames gives none.
IntimacyLevel pairwise_intimacy(const Trajectory& a, const Trajectory& b, const Config& cfg);

/// Evaluates all pairs; pairs whose bounding boxes are more than cfg.t2
/// apart or whose frame ranges overlap too little are skipped without
/// changing the result.
IntimacyGraph build_intimacy_graph(std::span<const Trajectory> tracks, const Config& cfg);

/// Node indices per group: connected components of the graph, each sorted,
/// groups ordered by their smallest node. Isolated nodes become singletons.
std::vector<std::vector<std::size_t>> extract_groups(const IntimacyGraph& graph);

/// Per-frame mean of member positions over frames where every member is
/// present. Throws EmptyCoPresenceError when there are none.
Trajectory group_center_trajectory(std::span<const Trajectory> members);

/// Cohesion-based emotion at `frame`:
///   k = 1 + mean_{i!=j} cos(v_i, v_j) - mean_{i!=j} | |v_i| - |v_j| | - n
///   E = 1 / (1 + exp(-k))
/// A single member yields 1. Pairs with a speed below 1e-6 m/s contribute
/// zero to the cosine sum.
double group_emotion(std::span<const Trajectory> members, Frame frame, const Config& cfg);

/// Same formula on explicit velocities.
double group_emotion_from_velocities(std::span<const Vec2> velocities);

struct MemberOffset {
  std::string agent_id;
  Vec2 offset;
};

struct GroupState {
  std::vector<std::size_t> member_indices;
  std::vector<std::string> members;
  Trajectory center;
  /// Mean emotion over the trailing cfg.emotion_frames center frames.
  double emotion = 1.0;
  /// Member position minus center at the last center frame.
  std::vector<MemberOffset> offsets;
};

/// Builds centers, emotions and offsets for the groups of `tracks`.
std::vector<GroupState> build_group_states(std::span<const Trajectory> tracks,
                                           const std::vector<std::vector<std::size_t>>& groups,
                                           const Config& cfg);

}  // namespace grouptraj
