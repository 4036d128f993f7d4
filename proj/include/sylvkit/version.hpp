#pragma once

namespace sylvkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sylvkit
