#pragma once

#include <cstdint>
#include <string>

#include "projwarp/image.hpp"

namespace projwarp {

// PGM P5 (binary, maxval 255) always; 8-bit PNG when built with libpng.
// Color PNG input is converted by integer BT.601 luma with a warning on
// stderr. Format selected by file extension (.png vs everything-else=PGM).
ImageBuffer load_image(const std::string& path);
void save_image(const ImageBuffer& img, const std::string& path);

bool png_supported();

// round((299*r + 587*g + 114*b) / 1000), half away from zero
std::uint8_t rgb_to_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);

}  // namespace projwarp
