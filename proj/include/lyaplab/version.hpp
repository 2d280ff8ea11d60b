#pragma once

namespace lyaplab {
inline constexpr const char* kVersion = "0.1.0";
}
