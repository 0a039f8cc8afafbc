#pragma once

namespace sblab {
inline constexpr const char* kVersion = "0.1.0";
}
