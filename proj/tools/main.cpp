#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "grouptraj/errors.hpp"
#include "options.hpp"

using namespace grouptraj;
using namespace grouptraj::cli;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

// Name of the subcommand on the command line, if any, so config keys
// outside a section can be routed to it before parsing.
std::string find_subcommand(int argc, char** argv, const CLI::App& app) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    for (const auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
      if (sub->get_name() == arg) return arg;
    }
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig rc;
  CLI::App app{"Group trajectory prediction: grouping, destination retrieval, force-based rollout and evaluation",
               "grouptraj"};
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  app.set_config("--config", "", "Read options from an INI file (keys outside a section apply to the subcommand)");
  app.add_option("--seed", rc.seed, "Random seed for seeded reconstruction")->capture_default_str();
  app.add_option("--out", rc.out_dir, "Output directory")->capture_default_str();
  app.require_subcommand(1);

  auto* ingest = app.add_subcommand("ingest", "Convert annotations to canonical frame,agent_id,x,y CSV");
  ingest->add_option("input", rc.data, "Annotation file (obsmat or canonical layout)")->required();
  ingest->add_option("--homography", rc.homography, "3x3 image-to-world homography file");
  ingest->add_option("--fps", rc.fps, "Rate at which annotation frame numbers advance, frames/s")
      ->capture_default_str();
  ingest->add_option("--column-map", rc.column_map, "Column indices, e.g. frame=0,id=1,x=2,y=4");
  ingest->add_flag("--pixels", rc.pixels, "Coordinates are pixels; requires --homography");
  ingest->add_option("-o,--output", rc.output, "Output CSV (default <out>/canonical.csv)");

  auto* groups = app.add_subcommand("groups", "Detect groups and their emotion at an endtime");
  auto* destinations = app.add_subcommand("destinations", "Retrieve candidate destinations per group");
  auto* predict = app.add_subcommand("predict", "Predict group and member trajectories after an endtime");
  auto* eval = app.add_subcommand("eval", "Evaluate minADE/minFDE over windows");
  auto* plot = app.add_subcommand("plot", "Render tracks, predictions and obstacles as SVG");

  for (auto* sub : {groups, destinations, predict, eval, plot}) {
    sub->add_option("data", rc.data, "Canonical trajectory CSV")->required();
  }
  for (auto* sub : {groups, destinations, predict, plot}) {
    sub->add_option("--endtime", rc.endtime, "Last known frame")->required();
  }
  for (auto* sub : {destinations, predict, eval}) {
    sub->add_option("--database", rc.database, "Canonical CSV of historical tracks (default: tracks ended before the known window)");
  }
  for (auto* sub : {predict, eval, plot}) sub->add_option("--scene", rc.scene, "Scene obstacle file");

  predict->add_option("--plot", rc.plot, "Also write an SVG figure to this path");
  predict->add_option("--reconstruction", rc.reconstruction, "Member deviation policy")
      ->check(CLI::IsMember({"rigid", "jitter"}))
      ->capture_default_str();
  predict->add_option("-o,--output", rc.output, "Output JSON lines (default <out>/predictions.jsonl)");

  auto* endtimes = eval->add_option("--endtimes", rc.endtimes, "Comma-separated endtimes")->delimiter(',');
  eval->add_option("--stride", rc.stride, "Window spacing in frames when --endtimes is absent")
      ->capture_default_str()
      ->excludes(endtimes);
  eval->add_option("--reconstruction", rc.reconstruction, "Member deviation policy")
      ->check(CLI::IsMember({"rigid", "jitter"}))
      ->capture_default_str();

  plot->add_option("--predictions", rc.predictions, "Prediction JSON lines to overlay");
  plot->add_option("-o,--output", rc.output, "Output SVG (default <out>/plot.svg)");

  for (auto* sub : {ingest, groups, destinations, predict, eval, plot}) add_model_options(*sub, rc);
  for (auto* sub : {destinations, predict, eval}) add_force_options(*sub, rc);

  app.config_formatter(std::make_shared<SubcommandConfig>(find_subcommand(argc, argv, app),
                                                          std::vector<std::string>{"seed", "out", "config"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc_exit = app.exit(e);
    return rc_exit == 0 ? 0 : kExitUsage;
  }

  try {
    rc.sync_force();
    rc.model.validate();
    rc.force.validate();
    std::filesystem::create_directories(rc.out_dir);
    const CLI::App* active = app.get_subcommands().front();
    const std::string resolved = resolved_config(app, *active);

    if (*ingest) return run_ingest(rc, resolved);
    if (*groups) return run_groups(rc, resolved);
    if (*destinations) return run_destinations(rc, resolved);
    if (*predict) return run_predict(rc, resolved);
    if (*eval) return run_eval(rc, resolved);
    if (*plot) return run_plot(rc, resolved);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const grouptraj::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
