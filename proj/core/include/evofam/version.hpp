#pragma once

namespace evofam {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace evofam
