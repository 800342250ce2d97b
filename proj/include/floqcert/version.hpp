#pragma once

namespace floqcert {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace floqcert
