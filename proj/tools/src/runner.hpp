#pragma once

#include <filesystem>
#include <string>

#include "config.hpp"

namespace wqed::cli {

struct RunReport {
  std::filesystem::path output_dir;
  int points_run = 0;
  std::vector<std::string> files;  // relative to output_dir
};

/// Executes every point of the plan under `output_dir` (point subdirectories
/// for sweeps), writes the per-sweep summary table and finally manifest.json.
/// `invocation` is recorded in the manifest verbatim.
RunReport execute_plan(const Plan& plan, const std::filesystem::path& output_dir,
                       const std::string& invocation);

}  // namespace wqed::cli
