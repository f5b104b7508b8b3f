#pragma once

namespace thinfilm {

inline constexpr const char* kVersion = "0.1.0";

} // namespace thinfilm
