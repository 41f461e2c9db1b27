#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "grouptraj/dynamics.hpp"
#include "grouptraj/types.hpp"

namespace grouptraj::cli {

/// Everything a run depends on. Serialized next to every run's outputs.
struct RunConfig {
  Config model;
  ForceParams force;
  std::uint64_t seed = 0;
  std::string out_dir = ".";

  // Subcommand inputs.
  std::string data;
  std::string scene;
  std::string database;
  std::string output;
  std::optional<std::int64_t> endtime;

  // ingest
  std::string homography;
  double fps = 25.0;
  std::string column_map;
  bool pixels = false;

  // predict
  std::string plot;
  std::string reconstruction = "rigid";

  // eval
  std::vector<std::int64_t> endtimes;
  std::int64_t stride = 100;

  // plot
  std::string predictions;

  /// ForceParams mirrors the shared model fields.
  void sync_force();
};

/// Registers the published model parameters on a subcommand.
void add_model_options(CLI::App& sub, RunConfig& rc);

/// Registers the social-force constants on a subcommand.
void add_force_options(CLI::App& sub, RunConfig& rc);

/// INI text for the active subcommand: the global keys, then one
/// `[subcommand]` section with every option that was given or has a default.
/// Options excluded by a given option are left out so the file parses again.
std::string resolved_config(const CLI::App& app, const CLI::App& sub);

/// INI reader that assigns keys outside any section to the subcommand being
/// run, so a plain `k = 1` file works for every subcommand.
class SubcommandConfig : public CLI::ConfigINI {
 public:
  SubcommandConfig(std::string section, std::vector<std::string> global_keys)
      : section_(std::move(section)), global_keys_(std::move(global_keys)) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;

 private:
  std::string section_;
  std::vector<std::string> global_keys_;
};

}  // namespace grouptraj::cli
