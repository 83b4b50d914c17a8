#pragma once

#include <cstddef>
#include <string_view>

namespace attrkws {

// CTC blank: output index 0 everywhere in the toolkit.
inline constexpr std::size_t kBlankIndex = 0;
inline constexpr std::string_view kBlankToken = "<blank>";

}  // namespace attrkws
