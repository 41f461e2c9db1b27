#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "grouptraj/pipeline.hpp"

namespace grouptraj {

/// Evaluation window anchored at the last known frame.
struct Window {
  Frame endtime = 0;

  Frame known_first(const Config& cfg) const { return endtime - cfg.known_time_steps + 1; }
  Frame horizon_last(const Config& cfg) const { return endtime + cfg.predict_time_steps; }
};

struct AgentScore {
  Frame endtime = 0;
  std::string agent_id;
  double min_ade = 0.0;
  double min_fde = 0.0;
  std::size_t ade_index = 0;
  std::size_t fde_index = 0;
  /// Constant-velocity extrapolation along the agent's own average direction.
  double baseline_ade = 0.0;
  double baseline_fde = 0.0;
};

struct WindowReport {
  Frame endtime = 0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  /// Groups with at least two members.
  std::size_t groups = 0;
  /// Means over evaluated agents; NaN when none.
  double min_ade = 0.0;
  double min_fde = 0.0;
  double baseline_ade = 0.0;
  double baseline_fde = 0.0;
};

struct MetricReport {
  /// Candidates per group: k retrieved plus the linear continuation.
  std::size_t k_used = 0;
  std::vector<WindowReport> windows;
  std::vector<AgentScore> agents;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  double min_ade = 0.0;
  double min_fde = 0.0;
  double baseline_ade = 0.0;
  double baseline_fde = 0.0;
};

/// Evenly spaced windows covering the dataset; stride in frames.
std::vector<Window> auto_windows(std::span<const Trajectory> tracks, const Config& cfg,
                                 Frame stride);

/// Scores every agent with full known and horizon coverage in each window.
/// Agents intersecting a window without full coverage are counted as
/// skipped. When `external_db` is null each window retrieves from tracks
/// that ended before its known window.
MetricReport run_experiment(std::span<const Trajectory> tracks,
                            std::shared_ptr<const SceneGeometry> scene,
                            std::span<const Window> windows, const Config& cfg,
                            const PredictionSettings& settings,
                            const TrajectoryDatabase* external_db = nullptr);

/// Aligned text table, one column per endtime, "ade/ fde" cells.
std::string format_results_table(const MetricReport& report);

/// `endtime,min_ade,min_fde,n_agents,n_skipped`
std::string format_results_csv(const MetricReport& report);

}  // namespace grouptraj
