#include "grouptraj/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <thread>
#include <unordered_map>

#include "grouptraj/canonical_csv.hpp"
#include "grouptraj/errors.hpp"
#include "grouptraj/metrics.hpp"

namespace grouptraj {

std::vector<Window> auto_windows(std::span<const Trajectory> tracks, const Config& cfg, Frame stride) {
  if (stride < 1) throw ValidationError("window stride must be >= 1");
  Frame lo = std::numeric_limits<Frame>::max();
  Frame hi = std::numeric_limits<Frame>::min();
  for (const auto& t : tracks) {
    if (t.empty()) continue;
    lo = std::min(lo, t.first_frame());
    hi = std::max(hi, t.last_frame());
  }
  std::vector<Window> out;
  if (lo > hi) return out;
  for (Frame e = lo + cfg.known_time_steps - 1; e + cfg.predict_time_steps <= hi; e += stride) out.push_back({e});
  return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct WindowResult {
  WindowReport report;
  std::vector<AgentScore> agents;
};

Trajectory linear_baseline(const Trajectory& known, const Config& cfg) {
  const QueryPose pose = make_query_pose(known);
  Trajectory out{known.agent_id, {}};
  const Frame last = known.last_frame();
  for (int h = 1; h <= cfg.predict_time_steps; ++h) {
    const Frame f = last + h;
    Vec2 p = pose.pos;
    if (!pose.stationary) p += pose.dir * (pose.speed * cfg.step_duration * static_cast<double>(h));
    out.points.push_back({f, static_cast<double>(f) * cfg.step_duration, p});
  }
  return out;
}

WindowResult evaluate_window(std::span<const Trajectory> tracks, const std::unordered_map<std::string, std::size_t>& by_id,
                             std::shared_ptr<const SceneGeometry> scene, Window w, const Config& cfg,
                             const PredictionSettings& settings, const TrajectoryDatabase* external_db) {
  WindowResult res;
  res.report.endtime = w.endtime;
  const Frame known_first = w.known_first(cfg);
  const Frame horizon_last = w.horizon_last(cfg);

  std::size_t intersecting = 0;
  for (const auto& t : tracks) {
    const bool hit = std::any_of(t.points.begin(), t.points.end(), [&](const TrackPoint& p) {
      return p.frame >= known_first && p.frame <= horizon_last;
    });
    if (hit) ++intersecting;
  }

  const TrajectoryDatabase local_db =
      external_db ? TrajectoryDatabase{} : history_database(tracks, known_first, cfg);
  const TrajectoryDatabase& db = external_db ? *external_db : local_db;
  const ScenePrediction pred = predict_scene(tracks, w.endtime, db, std::move(scene), cfg, settings);
  res.report.groups = static_cast<std::size_t>(std::count_if(
      pred.groups.begin(), pred.groups.end(), [](const GroupPrediction& g) { return g.group.members.size() > 1; }));

  double sum_ade = 0.0, sum_fde = 0.0, sum_bade = 0.0, sum_bfde = 0.0;
  for (const auto& gp : pred.groups) {
    for (std::size_t m = 0; m < gp.group.members.size(); ++m) {
      const Trajectory& full = tracks[by_id.at(gp.group.members[m])];
      const Trajectory known = full.slice(known_first, w.endtime);
      const Trajectory gt = full.slice(w.endtime + 1, horizon_last);
      if (known.size() != static_cast<std::size_t>(cfg.known_time_steps) ||
          gt.size() != static_cast<std::size_t>(cfg.predict_time_steps)) {
        continue;
      }
      std::vector<Trajectory> cands;
      cands.reserve(gp.member_candidates.size());
      for (const auto& c : gp.member_candidates) cands.push_back(c[m]);
      const auto best = min_over_candidates(cands, gt);
      const Trajectory base = linear_baseline(known, cfg);

      AgentScore s;
      s.endtime = w.endtime;
      s.agent_id = full.agent_id;
      s.min_ade = best.min_ade;
      s.min_fde = best.min_fde;
      s.ade_index = best.ade_index;
      s.fde_index = best.fde_index;
      s.baseline_ade = ade(base, gt);
      s.baseline_fde = fde(base, gt);
      sum_ade += s.min_ade;
      sum_fde += s.min_fde;
      sum_bade += s.baseline_ade;
      sum_bfde += s.baseline_fde;
      res.agents.push_back(std::move(s));
    }
  }
  std::sort(res.agents.begin(), res.agents.end(),
            [](const AgentScore& a, const AgentScore& b) { return agent_id_less(a.agent_id, b.agent_id); });

  const std::size_t n = res.agents.size();
  res.report.evaluated = n;
  res.report.skipped = intersecting - n;
  const double dn = static_cast<double>(n);
  res.report.min_ade = n ? sum_ade / dn : kNaN;
  res.report.min_fde = n ? sum_fde / dn : kNaN;
  res.report.baseline_ade = n ? sum_bade / dn : kNaN;
  res.report.baseline_fde = n ? sum_bfde / dn : kNaN;
  return res;
}

}  // namespace

MetricReport run_experiment(std::span<const Trajectory> tracks, std::shared_ptr<const SceneGeometry> scene,
                            std::span<const Window> windows, const Config& cfg,
                            const PredictionSettings& settings, const TrajectoryDatabase* external_db) {
  cfg.validate();
  settings.force.validate();
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (!by_id.emplace(tracks[i].agent_id, i).second) {
      throw DataError("duplicate agent id '" + tracks[i].agent_id + "'");
    }
  }

  std::vector<WindowResult> results(windows.size());
  std::vector<std::exception_ptr> errors(windows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < windows.size(); i = next++) {
      try {
        results[i] = evaluate_window(tracks, by_id, scene, windows[i], cfg, settings, external_db);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(windows.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MetricReport report;
  report.k_used = static_cast<std::size_t>(cfg.k_candidates) + 1;
  double sum_ade = 0.0, sum_fde = 0.0, sum_bade = 0.0, sum_bfde = 0.0;
  for (auto& r : results) {
    report.windows.push_back(r.report);
    report.skipped += r.report.skipped;
    for (auto& a : r.agents) {
      sum_ade += a.min_ade;
      sum_fde += a.min_fde;
      sum_bade += a.baseline_ade;
      sum_bfde += a.baseline_fde;
      report.agents.push_back(std::move(a));
    }
  }
  report.evaluated = report.agents.size();
  const double n = static_cast<double>(report.evaluated);
  report.min_ade = report.evaluated ? sum_ade / n : kNaN;
  report.min_fde = report.evaluated ? sum_fde / n : kNaN;
  report.baseline_ade = report.evaluated ? sum_bade / n : kNaN;
  report.baseline_fde = report.evaluated ? sum_bfde / n : kNaN;
  return report;
}

namespace {

std::string fixed6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_results_table(const MetricReport& report) {
  const std::size_t k_db = report.k_used > 0 ? report.k_used - 1 : 0;
  std::string out = "# K = " + std::to_string(report.k_used) + " candidates (" + std::to_string(k_db) +
                    " retrieved + linear continuation); cells are minADE/ minFDE in meters, "
                    "averaged over evaluated agents\n";
  constexpr std::size_t label_w = 11;
  constexpr std::size_t cell_w = 22;
  std::string header = pad("", label_w);
  std::string hybrid = pad("hybrid", label_w);
  std::string linear = pad("linear", label_w);
  std::string evaluated = pad("evaluated", label_w);
  std::string skipped = pad("skipped", label_w);
  std::string groups = pad("groups", label_w);
  for (const auto& w : report.windows) {
    header += pad("Endtime= " + std::to_string(w.endtime), cell_w);
    hybrid += pad(fixed6(w.min_ade) + "/ " + fixed6(w.min_fde), cell_w);
    linear += pad(fixed6(w.baseline_ade) + "/ " + fixed6(w.baseline_fde), cell_w);
    evaluated += pad(std::to_string(w.evaluated), cell_w);
    skipped += pad(std::to_string(w.skipped), cell_w);
    groups += pad(std::to_string(w.groups), cell_w);
  }
  for (std::string* line : {&header, &hybrid, &linear, &evaluated, &skipped, &groups}) {
    while (!line->empty() && line->back() == ' ') line->pop_back();
    out += *line;
    out += '\n';
  }
  out += "overall: minADE_" + std::to_string(report.k_used) + " = " + fixed6(report.min_ade) + ", minFDE_" +
         std::to_string(report.k_used) + " = " + fixed6(report.min_fde) + ", linear ADE/FDE = " +
         fixed6(report.baseline_ade) + "/ " + fixed6(report.baseline_fde) + " over " +
         std::to_string(report.evaluated) + " agents (" + std::to_string(report.skipped) + " skipped)\n";
  return out;
}

std::string format_results_csv(const MetricReport& report) {
  std::string out = "endtime,min_ade,min_fde,n_agents,n_skipped\n";
  auto num = [](double v) { return std::isnan(v) ? std::string("nan") : format_double(v); };
  for (const auto& w : report.windows) {
    out += std::to_string(w.endtime) + ',' + num(w.min_ade) + ',' + num(w.min_fde) + ',' +
           std::to_string(w.evaluated) + ',' + std::to_string(w.skipped) + '\n';
  }
  return out;
}

}  // namespace grouptraj
