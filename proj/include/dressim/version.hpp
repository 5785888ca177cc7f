#pragma once

namespace dressim {

inline constexpr const char* kVersion = "0.1.0";
// Bumped when any emitted JSON layout changes shape.
inline constexpr int kSchemaVersion = 1;

} // namespace dressim
