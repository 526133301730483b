#pragma once

namespace qrf {
inline constexpr const char* kVersion = "0.1.0";
}
