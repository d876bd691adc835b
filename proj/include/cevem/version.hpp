#pragma once

namespace cevem {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cevem
