#pragma once

namespace netform {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace netform
