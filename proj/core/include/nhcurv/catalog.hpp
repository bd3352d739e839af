#pragma once

// System-definition files and the built-in catalog.

#include <string>
#include <string_view>
#include <vector>

#include "nhcurv/system.hpp"

namespace nhcurv {

/// Parses a system file; `source` names it in error messages.
SystemDef parse_system(std::string_view text, const std::string& source,
                       const std::string& id = "");

/// Built-in id (disc, ball-sphere, heisenberg) or a path to a system file.
SystemDef load_system(const std::string& id_or_path);

std::vector<std::string> builtin_ids();
std::string_view builtin_text(const std::string& id);

}  // namespace nhcurv
