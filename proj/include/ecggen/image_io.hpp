#pragma once

#include <string>

#include "ecggen/raster.hpp"

namespace ecggen {

/// PNG with the physical resolution (pHYs chunk) set from dpi when dpi > 0.
void write_png(const std::string& path, const RasterImage& img, double dpi = 0.0);
RasterImage read_png(const std::string& path);

/// Binary P6 PPM, for zero-dependency inspection.
void write_ppm(const std::string& path, const RasterImage& img);
RasterImage read_ppm(const std::string& path);

/// Dispatch on extension (.png or .ppm).
void write_image(const std::string& path, const RasterImage& img, double dpi = 0.0);
RasterImage read_image(const std::string& path);

} // namespace ecggen
