#pragma once

namespace pointspec {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pointspec
