#pragma once

namespace isrsgn {
inline constexpr const char* kVersion = "0.1.0";
}
