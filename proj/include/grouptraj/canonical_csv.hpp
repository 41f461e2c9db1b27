#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grouptraj/types.hpp"

namespace grouptraj {

/// Header line of the canonical trajectory interchange format.
inline constexpr std::string_view kCanonicalHeader = "frame,agent_id,x,y";

/// Writes `frame,agent_id,x,y` rows sorted by (agent_id, frame). Coordinates
/// use the shortest representation that round-trips exactly.
std::string write_canonical_csv(std::span<const Trajectory> tracks);

/// Parses canonical CSV into per-agent trajectories sorted by agent id.
/// Point times are frame * step_duration.
std::vector<Trajectory> read_canonical_csv(std::string_view text, double step_duration);

/// Shortest round-trip decimal for a double.
std::string format_double(double v);

}  // namespace grouptraj
