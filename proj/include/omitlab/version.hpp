#pragma once

namespace omitlab {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kToolVersion = "omitlab 1.0.0";

}  // namespace omitlab
