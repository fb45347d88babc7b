#pragma once

namespace occkit {

inline constexpr const char* kToolName = "occkit";
inline constexpr const char* kToolVersion = "0.1.0";

// Generator used for every seeded computation in this library.
inline constexpr const char* kRngName = "mt19937_64";

}  // namespace occkit
