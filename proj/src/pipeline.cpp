#include "grouptraj/pipeline.hpp"

#include <json.hpp>

#include "grouptraj/errors.hpp"

namespace grouptraj {

using Json = nlohmann::ordered_json;

std::vector<Trajectory> known_window(std::span<const Trajectory> tracks, Frame endtime, const Config& cfg) {
  std::vector<Trajectory> out;
  const Frame first = endtime - cfg.known_time_steps + 1;
  for (const auto& t : tracks) {
    if (!t.index_of(endtime)) continue;
    Trajectory cut = t.slice(first, endtime);
    if (cut.size() >= 2) out.push_back(std::move(cut));
  }
  return out;
}

TrajectoryDatabase history_database(std::span<const Trajectory> tracks, Frame before_frame, const Config& cfg) {
  std::vector<Trajectory> done;
  for (const auto& t : tracks) {
    if (!t.empty() && t.last_frame() < before_frame) done.push_back(t);
  }
  return build_database(std::move(done), cfg);
}

ScenePrediction predict_scene(std::span<const Trajectory> tracks, Frame endtime, const TrajectoryDatabase& db,
                              std::shared_ptr<const SceneGeometry> scene, const Config& cfg,
                              const PredictionSettings& settings) {
  cfg.validate();
  settings.force.validate();

  ScenePrediction result;
  result.endtime = endtime;
  result.known = known_window(tracks, endtime, cfg);
  const auto graph = build_intimacy_graph(result.known, cfg);
  auto states = build_group_states(result.known, extract_groups(graph), cfg);

  std::vector<CandidateDestinations> destinations;
  std::vector<Body> bodies;
  destinations.reserve(states.size());
  bodies.reserve(states.size());
  for (std::size_t g = 0; g < states.size(); ++g) {
    QueryOptions opts = QueryOptions::from_config(cfg);
    opts.excluded_agents = states[g].members;
    destinations.push_back(candidate_destinations(states[g].center, db, cfg, opts));
    // Other groups head for their straight-line continuation.
    bodies.push_back(make_body(static_cast<std::uint32_t>(g), states[g].center,
                               destinations.back().destinations.back(), settings.force));
  }

  for (std::size_t g = 0; g < states.size(); ++g) {
    GroupPrediction gp;
    gp.group = std::move(states[g]);
    gp.destinations = std::move(destinations[g]);

    std::vector<Body> others;
    others.reserve(bodies.size());
    for (std::size_t o = 0; o < bodies.size(); ++o) {
      if (o != g) others.push_back(bodies[o]);
    }

    std::vector<Trajectory> member_known;
    for (std::size_t idx : gp.group.member_indices) member_known.push_back(result.known[idx]);
    ReconstructionPolicy policy;
    policy.mode = settings.reconstruction;
    policy.deviations = observed_deviations(member_known, gp.group.center, gp.group.offsets);

    for (std::size_t c = 0; c < gp.destinations.destinations.size(); ++c) {
      Body subject = bodies[g];
      subject.dest = gp.destinations.destinations[c];
      Trajectory traj = predict_group_trajectory(subject, others, scene, cfg.predict_time_steps,
                                                 gp.group.center.last_frame(), settings.force, cfg);
      traj.agent_id = gp.group.center.agent_id;
      policy.seed = settings.seed ^ (static_cast<std::uint64_t>(g) << 32) ^ static_cast<std::uint64_t>(c);
      gp.member_candidates.push_back(reconstruct_members(traj, gp.group.offsets, gp.group.emotion, policy));
      gp.candidates.push_back(std::move(traj));
    }
    result.groups.push_back(std::move(gp));
  }
  return result;
}

namespace {

Json points_json(const Trajectory& t) {
  Json arr = Json::array();
  for (const auto& p : t.points) arr.push_back(Json::array({p.frame, p.pos.x, p.pos.y}));
  return arr;
}

Json group_json(std::size_t index, const GroupState& g) {
  Json j;
  j["group"] = index;
  j["members"] = g.members;
  j["emotion"] = g.emotion;
  j["center"] = points_json(g.center);
  Json offsets = Json::object();
  for (const auto& o : g.offsets) offsets[o.agent_id] = Json::array({o.offset.x, o.offset.y});
  j["offsets"] = std::move(offsets);
  return j;
}

Json destinations_json(const CandidateDestinations& d) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < d.destinations.size(); ++i) {
    arr.push_back({{"x", d.destinations[i].x}, {"y", d.destinations[i].y}, {"source", d.provenance[i]}});
  }
  return arr;
}

}  // namespace

std::string prediction_to_json_lines(const ScenePrediction& prediction) {
  std::string out;
  for (std::size_t g = 0; g < prediction.groups.size(); ++g) {
    const auto& gp = prediction.groups[g];
    Json j;
    j["endtime"] = prediction.endtime;
    j["group"] = g;
    j["members"] = gp.group.members;
    j["emotion"] = gp.group.emotion;
    j["short_history"] = gp.destinations.short_history;
    j["known_center"] = points_json(gp.group.center);
    j["destinations"] = destinations_json(gp.destinations);
    Json cands = Json::array();
    for (const auto& c : gp.candidates) cands.push_back(points_json(c));
    j["candidates"] = std::move(cands);
    Json members = Json::array();
    for (std::size_t m = 0; m < gp.group.members.size(); ++m) {
      Json per = Json::array();
      for (const auto& cand : gp.member_candidates) per.push_back(points_json(cand[m]));
      members.push_back({{"agent_id", gp.group.members[m]}, {"candidates", std::move(per)}});
    }
    j["member_predictions"] = std::move(members);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string groups_to_json_lines(std::span<const GroupState> groups) {
  std::string out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    out += group_json(g, groups[g]).dump();
    out += '\n';
  }
  return out;
}

std::string destinations_to_json_lines(std::span<const GroupState> groups,
                                       std::span<const CandidateDestinations> destinations) {
  if (groups.size() != destinations.size()) throw ValidationError("groups and destinations differ in count");
  std::string out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Json j;
    j["group"] = g;
    j["members"] = groups[g].members;
    j["position"] = Json::array({destinations[g].pose.pos.x, destinations[g].pose.pos.y});
    j["direction"] = Json::array({destinations[g].pose.dir.x, destinations[g].pose.dir.y});
    j["speed"] = destinations[g].pose.speed;
    j["short_history"] = destinations[g].short_history;
    j["destinations"] = destinations_json(destinations[g]);
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace grouptraj
