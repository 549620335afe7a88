#pragma once

namespace pilotwave {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace pilotwave
