#pragma once

namespace sshstat {

inline constexpr const char* kVersion = "0.1.0";

} // namespace sshstat
