// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace nffbeam {

inline constexpr std::string_view version = "0.1.0";
inline constexpr std::string_view tool_name = "nffbeam";

} // namespace nffbeam
