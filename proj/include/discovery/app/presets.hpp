#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace discovery::app {

/// Embedded config text for "fig1", "fig2" (simulate), "macro7" (macroscopic)
/// and "coverage" (concentration). Same bytes as configs/<name>.json.
std::optional<std::string_view> preset_text(std::string_view name);

std::vector<std::string_view> preset_names();

}  // namespace discovery::app
