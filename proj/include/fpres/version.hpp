#pragma once

namespace fpres {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fpres
