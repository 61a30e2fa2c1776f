#pragma once

namespace isoflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace isoflow
