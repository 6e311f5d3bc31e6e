#pragma once

namespace nkji {
inline constexpr const char* kVersion = "1.0.0";
}
