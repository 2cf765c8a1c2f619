#pragma once

#include <cstdint>

namespace ecggen {

extern const std::uint8_t kFont5x7[95][5]; // ASCII 32..126, column bytes, bit 0 = top

} // namespace ecggen
