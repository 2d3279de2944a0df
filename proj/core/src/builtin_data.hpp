#pragma once

#include <string_view>

namespace riddleforge::detail {

// Contents of a bundled file from core/data, or empty if unknown.
std::string_view builtin_data(std::string_view name);

}  // namespace riddleforge::detail
