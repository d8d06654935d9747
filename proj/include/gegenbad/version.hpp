#pragma once

namespace gegenbad {

inline constexpr const char* tool_version = "1.0.0";

}
