#pragma once

namespace gffv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gffv
