#include "options.hpp"

#include <algorithm>
#include <cstdlib>

namespace grouptraj::cli {

void RunConfig::sync_force() {
  force.neighborhood_range = model.neighborhood_range;
  force.mass = model.person_mass;
  force.radius = model.person_radius;
}

void add_model_options(CLI::App& sub, RunConfig& rc) {
  Config& c = rc.model;
  const std::string g = "Model parameters";
  sub.add_option("--known-time-steps", c.known_time_steps, "Known trajectory length, steps")
      ->capture_default_str()->group(g);
  sub.add_option("--predict-time-steps", c.predict_time_steps, "Predicted trajectory length, steps")
      ->capture_default_str()->group(g);
  sub.add_option("--k", c.k_candidates, "Number of retrieved candidate destinations")
      ->capture_default_str()->group(g);
  sub.add_option("--person-radius", c.person_radius, "Radius of a person, m")->capture_default_str()->group(g);
  sub.add_option("--step-duration", c.step_duration, "Duration of a time step, s")->capture_default_str()->group(g);
  sub.add_option("--neighborhood-range", c.neighborhood_range, "Neighborhood range, m")
      ->capture_default_str()->group(g);
  sub.add_option("--person-mass", c.person_mass, "Mass of a person, kg")->capture_default_str()->group(g);
  sub.add_option("--t1", c.t1, "Intimate distance threshold, m")->capture_default_str()->group(g);
  sub.add_option("--t2", c.t2, "Personal distance threshold, m")->capture_default_str()->group(g);
  sub.add_option("--min-overlap", c.min_overlap, "Co-present frames required for intimacy")
      ->capture_default_str()->group(g);
  sub.add_option("--emotion-frames", c.emotion_frames, "Trailing frames averaged into group emotion")
      ->capture_default_str()->group(g);
  sub.add_option("--direction-weight", c.direction_weight, "Weight of the heading term in retrieval")
      ->capture_default_str()->group(g);
  sub.add_option("--dedup-by-agent", c.dedup_by_agent, "Keep one retrieved sample per database agent")
      ->capture_default_str()->group(g);
}

void add_force_options(CLI::App& sub, RunConfig& rc) {
  ForceParams& f = rc.force;
  const std::string g = "Force parameters";
  sub.add_option("--relaxation-time", f.relaxation_time, "Relaxation time, s")->capture_default_str()->group(g);
  sub.add_option("--repulsion-strength", f.repulsion_strength, "Body repulsion strength, N")
      ->capture_default_str()->group(g);
  sub.add_option("--repulsion-range", f.repulsion_range, "Body repulsion range, m")->capture_default_str()->group(g);
  sub.add_option("--obstacle-strength", f.obstacle_strength, "Obstacle repulsion strength, N")
      ->capture_default_str()->group(g);
  sub.add_option("--obstacle-range", f.obstacle_range, "Obstacle repulsion range, m")
      ->capture_default_str()->group(g);
  sub.add_option("--max-speed-factor", f.max_speed_factor, "Speed cap as a multiple of desired speed")
      ->capture_default_str()->group(g);
  sub.add_option("--min-desired-speed", f.min_desired_speed, "Desired speed floor, m/s")
      ->capture_default_str()->group(g);
  sub.add_option("--substeps", f.substeps, "Integration sub-steps per time step")->capture_default_str()->group(g);
}

namespace {

std::string ini_value(const std::string& v) {
  if (v.empty()) return "\"\"";
  char* end = nullptr;
  std::strtod(v.c_str(), &end);
  if (*end == '\0' || v == "true" || v == "false") return v;
  return CLI::detail::convert_arg_for_ini(v);
}

void append_options(std::string& out, const CLI::App& app) {
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->get_single_name().empty() || !opt->get_configurable()) continue;
    if (opt->get_name() == "--help" || opt->get_name() == "--help-all" || opt->get_name() == "--config") continue;
    const auto excluded = opt->get_excludes();
    if (std::any_of(excluded.begin(), excluded.end(), [](const CLI::Option* o) { return o->count() > 0; })) continue;
    std::vector<std::string> values = opt->results();
    if (values.empty()) {
      if (opt->get_default_str().empty()) continue;
      values = {opt->get_default_str()};
    }
    out += opt->get_single_name() + '=';
    if (values.size() == 1) {
      out += ini_value(values.front());
    } else {
      out += '[';
      for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + ini_value(values[i]);
      out += ']';
    }
    out += '\n';
  }
}

}  // namespace

std::string resolved_config(const CLI::App& app, const CLI::App& sub) {
  std::string out = "# grouptraj " + sub.get_name() + "\n";
  append_options(out, app);
  out += "\n[" + sub.get_name() + "]\n";
  append_options(out, sub);
  return out;
}

std::vector<CLI::ConfigItem> SubcommandConfig::from_config(std::istream& input) const {
  auto items = CLI::ConfigINI::from_config(input);
  for (auto& item : items) {
    const bool top = item.parents.empty() || (item.parents.size() == 1 && item.parents[0] == "default");
    if (!top || section_.empty()) continue;
    if (std::find(global_keys_.begin(), global_keys_.end(), item.name) != global_keys_.end()) continue;
    item.parents = {section_};
  }
  return items;
}

}  // namespace grouptraj::cli
