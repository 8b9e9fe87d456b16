#pragma once

#include <optional>
#include <string>
#include <vector>

namespace wqed::cli {

/// Built-in experiment configurations, expressed in the same format the
/// `run`/`sweep` subcommands accept. Returns nothing for unknown names.
std::optional<std::string> preset_config(const std::string& name);

std::vector<std::string> preset_names();

}  // namespace wqed::cli
