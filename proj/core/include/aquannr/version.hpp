#pragma once

namespace aquannr {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace aquannr
