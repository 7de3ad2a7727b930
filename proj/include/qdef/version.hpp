#pragma once

namespace qdef {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qdef
