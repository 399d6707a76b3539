#pragma once

namespace avcp {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kConfigSchemaVersion = "1";

}  // namespace avcp
