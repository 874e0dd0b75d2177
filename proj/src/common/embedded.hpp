#pragma once

#include <optional>
#include <string_view>

namespace foamagent {

/// Data files compiled into the library (prompt templates, whitelists),
/// keyed by their path relative to data/.
std::optional<std::string_view> embedded_file(std::string_view name);

}  // namespace foamagent
