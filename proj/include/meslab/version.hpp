#pragma once

namespace meslab {

inline constexpr const char* version = "0.1.0";

}  // namespace meslab
