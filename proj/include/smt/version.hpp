#pragma once

namespace smt {
inline constexpr const char* kVersion = "0.1.0";
}
