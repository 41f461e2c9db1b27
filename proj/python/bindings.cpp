#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "grouptraj/canonical_csv.hpp"
#include "grouptraj/errors.hpp"
#include "grouptraj/experiment.hpp"
#include "grouptraj/ingest.hpp"
#include "grouptraj/metrics.hpp"
#include "grouptraj/pipeline.hpp"
#include "grouptraj/svg.hpp"

namespace py = pybind11;
using namespace grouptraj;

namespace {

std::vector<std::tuple<Frame, double, double>> points_of(const Trajectory& t) {
  std::vector<std::tuple<Frame, double, double>> out;
  out.reserve(t.size());
  for (const auto& p : t.points) out.emplace_back(p.frame, p.pos.x, p.pos.y);
  return out;
}

Trajectory make_trajectory(std::string id, const std::vector<std::tuple<Frame, double, double>>& pts,
                           double step_duration) {
  Trajectory t{std::move(id), {}};
  for (const auto& [f, x, y] : pts) t.points.push_back({f, static_cast<double>(f) * step_duration, {x, y}});
  return t;
}

std::shared_ptr<const SceneGeometry> scene_of(const std::optional<std::string>& text) {
  if (!text) return nullptr;
  auto scene = std::make_shared<SceneGeometry>(parse_scene(*text));
  validate_scene(*scene);
  return scene;
}

PredictionSettings settings(const ForceParams& force, const std::string& reconstruction, std::uint64_t seed) {
  PredictionSettings s{force, ReconstructionMode::rigid, seed};
  if (reconstruction == "jitter") {
    s.reconstruction = ReconstructionMode::seeded_jitter;
  } else if (reconstruction != "rigid") {
    throw ValidationError("reconstruction must be 'rigid' or 'jitter'");
  }
  return s;
}

ForceParams force_for(const Config& cfg, std::optional<ForceParams> force) {
  ForceParams f = force.value_or(ForceParams{});
  f.neighborhood_range = cfg.neighborhood_range;
  f.mass = cfg.person_mass;
  f.radius = cfg.person_radius;
  return f;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Group trajectory prediction core";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());

  py::class_<Config>(m, "Config")
      .def(py::init<>())
      .def_readwrite("known_time_steps", &Config::known_time_steps)
      .def_readwrite("predict_time_steps", &Config::predict_time_steps)
      .def_readwrite("k_candidates", &Config::k_candidates)
      .def_readwrite("person_radius", &Config::person_radius)
      .def_readwrite("step_duration", &Config::step_duration)
      .def_readwrite("neighborhood_range", &Config::neighborhood_range)
      .def_readwrite("person_mass", &Config::person_mass)
      .def_readwrite("t1", &Config::t1)
      .def_readwrite("t2", &Config::t2)
      .def_readwrite("min_overlap", &Config::min_overlap)
      .def_readwrite("emotion_frames", &Config::emotion_frames)
      .def_readwrite("direction_weight", &Config::direction_weight)
      .def_readwrite("dedup_by_agent", &Config::dedup_by_agent)
      .def("validate", &Config::validate);

  py::class_<ForceParams>(m, "ForceParams")
      .def(py::init<>())
      .def_readwrite("relaxation_time", &ForceParams::relaxation_time)
      .def_readwrite("repulsion_strength", &ForceParams::repulsion_strength)
      .def_readwrite("repulsion_range", &ForceParams::repulsion_range)
      .def_readwrite("obstacle_strength", &ForceParams::obstacle_strength)
      .def_readwrite("obstacle_range", &ForceParams::obstacle_range)
      .def_readwrite("max_speed_factor", &ForceParams::max_speed_factor)
      .def_readwrite("min_desired_speed", &ForceParams::min_desired_speed)
      .def_readwrite("substeps", &ForceParams::substeps);

  py::class_<Trajectory>(m, "Trajectory")
      .def(py::init(&make_trajectory), py::arg("agent_id"), py::arg("points"), py::arg("step_duration") = 0.3999)
      .def_readonly("agent_id", &Trajectory::agent_id)
      .def_property_readonly("points", &points_of)
      .def("__len__", &Trajectory::size)
      .def("__repr__", [](const Trajectory& t) {
        return "<Trajectory " + t.agent_id + " with " + std::to_string(t.size()) + " points>";
      });

  py::class_<GroupState>(m, "GroupState")
      .def_readonly("members", &GroupState::members)
      .def_readonly("center", &GroupState::center)
      .def_readonly("emotion", &GroupState::emotion);

  py::class_<TrajectoryDatabase>(m, "TrajectoryDatabase")
      .def_property_readonly("num_samples", [](const TrajectoryDatabase& db) { return db.samples().size(); })
      .def_property_readonly("num_tracks", [](const TrajectoryDatabase& db) { return db.tracks().size(); });

  py::class_<WindowReport>(m, "WindowReport")
      .def_readonly("endtime", &WindowReport::endtime)
      .def_readonly("evaluated", &WindowReport::evaluated)
      .def_readonly("skipped", &WindowReport::skipped)
      .def_readonly("groups", &WindowReport::groups)
      .def_readonly("min_ade", &WindowReport::min_ade)
      .def_readonly("min_fde", &WindowReport::min_fde)
      .def_readonly("baseline_ade", &WindowReport::baseline_ade)
      .def_readonly("baseline_fde", &WindowReport::baseline_fde);

  py::class_<MetricReport>(m, "MetricReport")
      .def_readonly("k_used", &MetricReport::k_used)
      .def_readonly("windows", &MetricReport::windows)
      .def_readonly("evaluated", &MetricReport::evaluated)
      .def_readonly("skipped", &MetricReport::skipped)
      .def_readonly("min_ade", &MetricReport::min_ade)
      .def_readonly("min_fde", &MetricReport::min_fde)
      .def_readonly("baseline_ade", &MetricReport::baseline_ade)
      .def_readonly("baseline_fde", &MetricReport::baseline_fde)
      .def("table", &format_results_table)
      .def("csv", &format_results_csv);

  m.def("read_canonical_csv", [](const std::string& text, const Config& cfg) {
    return read_canonical_csv(text, cfg.step_duration);
  }, py::arg("text"), py::arg("config") = Config{});
  m.def("write_canonical_csv", [](const std::vector<Trajectory>& tracks) { return write_canonical_csv(tracks); });

  m.def("ingest", [](const std::string& text, double fps, std::optional<std::string> homography,
                     std::optional<std::string> column_map, const Config& cfg) {
    std::optional<ingest::ColumnMap> columns;
    if (column_map) columns = ingest::parse_column_map(*column_map);
    std::optional<ingest::Homography> h;
    if (homography) h = ingest::Homography::parse(*homography);
    return ingest::to_canonical(ingest::parse_obsmat(text, columns), h, fps, cfg).csv;
  }, py::arg("text"), py::arg("fps") = 25.0, py::arg("homography") = py::none(),
     py::arg("column_map") = py::none(), py::arg("config") = Config{},
     "Annotation text to canonical frame,agent_id,x,y CSV.");

  m.def("known_window", &known_window, py::arg("tracks"), py::arg("endtime"), py::arg("config") = Config{});

  m.def("detect_groups", [](const std::vector<Trajectory>& tracks, Frame endtime, const Config& cfg) {
    const auto known = known_window(tracks, endtime, cfg);
    return build_group_states(known, extract_groups(build_intimacy_graph(known, cfg)), cfg);
  }, py::arg("tracks"), py::arg("endtime"), py::arg("config") = Config{},
     "Groups of the agents present at endtime.");

  m.def("build_database", [](std::vector<Trajectory> tracks, const Config& cfg) {
    return build_database(std::move(tracks), cfg);
  }, py::arg("tracks"), py::arg("config") = Config{});
  m.def("history_database", &history_database, py::arg("tracks"), py::arg("before_frame"),
        py::arg("config") = Config{});

  m.def("candidate_destinations", [](const GroupState& g, const TrajectoryDatabase& db, const Config& cfg) {
    QueryOptions opts = QueryOptions::from_config(cfg);
    opts.excluded_agents = g.members;
    const auto c = candidate_destinations(g.center, db, cfg, opts);
    std::vector<std::pair<std::pair<double, double>, std::string>> out;
    for (std::size_t i = 0; i < c.destinations.size(); ++i) {
      out.push_back({{c.destinations[i].x, c.destinations[i].y}, c.provenance[i]});
    }
    return out;
  }, py::arg("group"), py::arg("database"), py::arg("config") = Config{},
     "[((x, y), source), ...] with the linear continuation last.");

  m.def("predict", [](const std::vector<Trajectory>& tracks, Frame endtime, std::optional<TrajectoryDatabase> db,
                      std::optional<std::string> scene, const Config& cfg, std::optional<ForceParams> force,
                      const std::string& reconstruction, std::uint64_t seed) {
    cfg.validate();
    const auto database = db ? std::move(*db) : history_database(tracks, endtime - cfg.known_time_steps + 1, cfg);
    const auto s = settings(force_for(cfg, force), reconstruction, seed);
    ScenePrediction pred;
    {
      py::gil_scoped_release release;
      pred = predict_scene(tracks, endtime, database, scene_of(scene), cfg, s);
    }
    return prediction_to_json_lines(pred);
  }, py::arg("tracks"), py::arg("endtime"), py::arg("database") = py::none(), py::arg("scene") = py::none(),
     py::arg("config") = Config{}, py::arg("force") = py::none(), py::arg("reconstruction") = "rigid",
     py::arg("seed") = 0, "Prediction JSON lines, one object per group.");

  m.def("evaluate", [](const std::vector<Trajectory>& tracks, std::vector<Frame> endtimes,
                       std::optional<std::string> scene, const Config& cfg, std::optional<ForceParams> force,
                       const std::string& reconstruction, std::uint64_t seed) {
    cfg.validate();
    std::vector<Window> windows;
    for (auto e : endtimes) windows.push_back({e});
    const auto s = settings(force_for(cfg, force), reconstruction, seed);
    py::gil_scoped_release release;
    return run_experiment(tracks, scene_of(scene), windows, cfg, s);
  }, py::arg("tracks"), py::arg("endtimes"), py::arg("scene") = py::none(), py::arg("config") = Config{},
     py::arg("force") = py::none(), py::arg("reconstruction") = "rigid", py::arg("seed") = 0);

  m.def("ade", &ade, py::arg("prediction"), py::arg("truth"));
  m.def("fde", &fde, py::arg("prediction"), py::arg("truth"));
}
