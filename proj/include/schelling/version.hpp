#pragma once

#ifndef SCHELLING_BUILD_ID
#define SCHELLING_BUILD_ID "unknown"
#endif

namespace schelling {

inline constexpr const char* kVersion = "schelling 1.0.0 (" SCHELLING_BUILD_ID ")";

}  // namespace schelling
