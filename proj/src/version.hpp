#pragma once

namespace genbayes {

// Keep in sync with the CMake project() version.
inline constexpr const char* kVersion = "0.1.0";

}  // namespace genbayes
