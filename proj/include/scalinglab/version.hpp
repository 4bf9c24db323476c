#pragma once

namespace scalinglab {

inline constexpr const char* kVersion = "scaling-lab 0.1.0";

}
