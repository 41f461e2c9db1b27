#include "commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "grouptraj/canonical_csv.hpp"
#include "grouptraj/errors.hpp"
#include "grouptraj/experiment.hpp"
#include "grouptraj/ingest.hpp"
#include "grouptraj/pipeline.hpp"
#include "grouptraj/svg.hpp"

namespace grouptraj::cli {

namespace fs = std::filesystem;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << text;
}

fs::path output_path(const RunConfig& rc, const std::string& fallback) {
  return rc.output.empty() ? fs::path(rc.out_dir) / fallback : fs::path(rc.output);
}

void write_run_config(const RunConfig& rc, const std::string& resolved) {
  write_text(fs::path(rc.out_dir) / "run_config.ini", resolved);
}

std::vector<Trajectory> load_tracks(const std::string& path, const Config& cfg) {
  return read_canonical_csv(read_text(path), cfg.step_duration);
}

std::shared_ptr<const SceneGeometry> load_scene(const std::string& path) {
  if (path.empty()) return nullptr;
  auto scene = std::make_shared<SceneGeometry>(parse_scene(read_text(path)));
  validate_scene(*scene);
  return scene;
}

TrajectoryDatabase load_database(const RunConfig& rc, std::span<const Trajectory> tracks, Frame known_first) {
  if (rc.database.empty()) return history_database(tracks, known_first, rc.model);
  return build_database(load_tracks(rc.database, rc.model), rc.model);
}

PredictionSettings settings_of(const RunConfig& rc) {
  PredictionSettings s;
  s.force = rc.force;
  s.reconstruction = rc.reconstruction == "jitter" ? ReconstructionMode::seeded_jitter : ReconstructionMode::rigid;
  s.seed = rc.seed;
  return s;
}

Frame known_first(const RunConfig& rc) { return *rc.endtime - rc.model.known_time_steps + 1; }

std::vector<GroupState> groups_at(std::span<const Trajectory> tracks, const RunConfig& rc,
                                  std::vector<Trajectory>& known) {
  known = known_window(tracks, *rc.endtime, rc.model);
  const auto graph = build_intimacy_graph(known, rc.model);
  return build_group_states(known, extract_groups(graph), rc.model);
}

void warn_if_empty(std::size_t n, const RunConfig& rc) {
  if (n == 0) std::cerr << "warning: no agents present at endtime " << *rc.endtime << '\n';
}

Trajectory points_from_json(const nlohmann::json& arr, const std::string& id) {
  Trajectory t{id, {}};
  for (const auto& p : arr) t.points.push_back({p.at(0).get<Frame>(), 0.0, {p.at(1).get<double>(), p.at(2).get<double>()}});
  return t;
}

}  // namespace

int run_ingest(const RunConfig& rc, const std::string& resolved) {
  if (!(rc.fps > 0.0)) throw grouptraj::ValidationError("--fps must be > 0, got " + format_double(rc.fps));
  if (rc.pixels && rc.homography.empty()) throw UsageError("--pixels requires --homography");
  const std::string text = read_text(rc.data);
  std::optional<ingest::ColumnMap> columns;
  if (!rc.column_map.empty()) columns = ingest::parse_column_map(rc.column_map);
  std::optional<ingest::Homography> h;
  if (!rc.homography.empty()) h = ingest::Homography::parse(read_text(rc.homography));

  const auto rows = ingest::parse_obsmat(text, columns);
  const auto out = ingest::to_canonical(rows, h, rc.fps, rc.model);
  const fs::path csv = output_path(rc, "canonical.csv");
  write_text(csv, out.csv);

  nlohmann::ordered_json summary;
  summary["input"] = rc.data;
  summary["output"] = csv.string();
  summary["rows"] = out.summary.rows;
  summary["source_agents"] = out.summary.source_agents;
  summary["tracks_written"] = out.summary.tracks_written;
  summary["dropped_tracks"] = out.summary.dropped_tracks;
  summary["split_tracks"] = out.summary.split_tracks;
  write_text(fs::path(rc.out_dir) / "ingest_summary.json", summary.dump(2) + "\n");
  write_run_config(rc, resolved);
  std::cout << "rows: " << out.summary.rows << "\nagents: " << out.summary.source_agents
            << "\ntracks written: " << out.summary.tracks_written << "\ndropped tracks: " << out.summary.dropped_tracks
            << "\nsplit tracks: " << out.summary.split_tracks << "\noutput: " << csv.string() << '\n';
  return 0;
}

int run_groups(const RunConfig& rc, const std::string& resolved) {
  const auto tracks = load_tracks(rc.data, rc.model);
  std::vector<Trajectory> known;
  const auto states = groups_at(tracks, rc, known);
  warn_if_empty(known.size(), rc);
  write_text(output_path(rc, "groups.jsonl"), groups_to_json_lines(states));
  write_run_config(rc, resolved);
  std::size_t multi = 0;
  for (const auto& s : states) multi += s.members.size() > 1;
  std::cout << states.size() << " groups (" << multi << " with two or more members) at endtime " << *rc.endtime
            << '\n';
  return 0;
}

int run_destinations(const RunConfig& rc, const std::string& resolved) {
  const auto tracks = load_tracks(rc.data, rc.model);
  std::vector<Trajectory> known;
  const auto states = groups_at(tracks, rc, known);
  warn_if_empty(known.size(), rc);
  const auto db = load_database(rc, tracks, known_first(rc));
  std::vector<CandidateDestinations> dests;
  for (const auto& s : states) {
    QueryOptions opts = QueryOptions::from_config(rc.model);
    opts.excluded_agents = s.members;
    dests.push_back(candidate_destinations(s.center, db, rc.model, opts));
  }
  write_text(output_path(rc, "destinations.jsonl"), destinations_to_json_lines(states, dests));
  write_run_config(rc, resolved);
  std::cout << states.size() << " groups, " << db.samples().size() << " database samples\n";
  return 0;
}

int run_predict(const RunConfig& rc, const std::string& resolved) {
  const auto tracks = load_tracks(rc.data, rc.model);
  const auto scene = load_scene(rc.scene);
  const auto db = load_database(rc, tracks, known_first(rc));
  const auto pred = predict_scene(tracks, *rc.endtime, db, scene, rc.model, settings_of(rc));
  if (pred.groups.empty()) std::cerr << "warning: no groups at endtime " << *rc.endtime << '\n';
  write_text(output_path(rc, "predictions.jsonl"), prediction_to_json_lines(pred));

  if (!rc.plot.empty()) {
    SvgFigure fig;
    if (scene) fig.add_scene(*scene);
    for (const auto& k : pred.known) fig.add_trajectory(k, StrokeClass::known);
    for (const auto& g : pred.groups) {
      for (const auto& cand : g.member_candidates) {
        for (const auto& m : cand) fig.add_trajectory(m, StrokeClass::predicted);
      }
    }
    write_text(rc.plot, fig.render());
  }
  write_run_config(rc, resolved);
  std::cout << pred.groups.size() << " groups predicted at endtime " << *rc.endtime << '\n';
  return 0;
}

int run_eval(const RunConfig& rc, const std::string& resolved) {
  const auto tracks = load_tracks(rc.data, rc.model);
  const auto scene = load_scene(rc.scene);
  std::vector<Window> windows;
  if (!rc.endtimes.empty()) {
    for (auto e : rc.endtimes) windows.push_back({e});
  } else {
    windows = auto_windows(tracks, rc.model, rc.stride);
  }
  std::optional<TrajectoryDatabase> db;
  if (!rc.database.empty()) db = build_database(load_tracks(rc.database, rc.model), rc.model);
  const auto report = run_experiment(tracks, scene, windows, rc.model, settings_of(rc), db ? &*db : nullptr);

  const std::string table = format_results_table(report);
  write_text(fs::path(rc.out_dir) / "results.txt", table);
  write_text(fs::path(rc.out_dir) / "results.csv", format_results_csv(report));
  std::string agents = "endtime,agent_id,min_ade,min_fde,ade_index,fde_index,linear_ade,linear_fde\n";
  for (const auto& a : report.agents) {
    agents += std::to_string(a.endtime) + ',' + a.agent_id + ',' + format_double(a.min_ade) + ',' +
              format_double(a.min_fde) + ',' + std::to_string(a.ade_index) + ',' + std::to_string(a.fde_index) + ',' +
              format_double(a.baseline_ade) + ',' + format_double(a.baseline_fde) + '\n';
  }
  write_text(fs::path(rc.out_dir) / "agents.csv", agents);
  write_run_config(rc, resolved);
  std::cout << table;
  return 0;
}

int run_plot(const RunConfig& rc, const std::string& resolved) {
  const auto tracks = load_tracks(rc.data, rc.model);
  const auto scene = load_scene(rc.scene);
  const Frame end = *rc.endtime;
  SvgFigure fig;
  if (scene) fig.add_scene(*scene);
  for (const auto& t : known_window(tracks, end, rc.model)) {
    fig.add_trajectory(t, StrokeClass::known);
    const auto& full = *std::find_if(tracks.begin(), tracks.end(),
                                     [&](const Trajectory& x) { return x.agent_id == t.agent_id; });
    // Ground truth starts at the last known point so the strokes join.
    fig.add_trajectory(full.slice(end, end + rc.model.predict_time_steps), StrokeClass::ground_truth);
  }
  if (!rc.predictions.empty()) {
    std::istringstream in(read_text(rc.predictions));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
        for (const auto& m : j.at("member_predictions")) {
          for (const auto& c : m.at("candidates")) {
            fig.add_trajectory(points_from_json(c, m.at("agent_id").get<std::string>()), StrokeClass::predicted);
          }
        }
      } catch (const nlohmann::json::exception& e) {
        throw grouptraj::ParseError(line_no, std::string("bad prediction record: ") + e.what());
      }
    }
  }
  const fs::path svg = output_path(rc, "plot.svg");
  write_text(svg, fig.render());
  write_run_config(rc, resolved);
  std::cout << "wrote " << svg.string() << '\n';
  return 0;
}

}  // namespace grouptraj::cli
