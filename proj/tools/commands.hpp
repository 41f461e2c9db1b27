#pragma once

#include <stdexcept>
#include <string>

#include "options.hpp"

namespace grouptraj::cli {

/// Bad invocation detected after parsing (missing input file, conflicting
/// flags). Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Each command writes its outputs plus `run_config.ini` (the resolved
// configuration) into rc.out_dir and returns the process exit code.
int run_ingest(const RunConfig& rc, const std::string& resolved);
int run_groups(const RunConfig& rc, const std::string& resolved);
int run_destinations(const RunConfig& rc, const std::string& resolved);
int run_predict(const RunConfig& rc, const std::string& resolved);
int run_eval(const RunConfig& rc, const std::string& resolved);
int run_plot(const RunConfig& rc, const std::string& resolved);

}  // namespace grouptraj::cli
