#pragma once

namespace lasercov {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lasercov
