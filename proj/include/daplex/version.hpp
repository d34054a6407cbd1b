#pragma once

namespace daplex {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace daplex
