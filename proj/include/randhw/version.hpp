#pragma once

namespace rhw {

inline constexpr const char* kVersion = "0.1.0";

} // namespace rhw
