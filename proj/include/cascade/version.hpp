#pragma once

namespace cascade {

inline constexpr const char* kVersion = "cascade-sim 1.0.0";

} // namespace cascade
