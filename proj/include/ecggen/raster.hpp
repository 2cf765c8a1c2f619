#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ecggen {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

/// 8-bit-per-channel RGB buffer, row-major.
struct RasterImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; // width * height * 3

    RasterImage() = default;
    RasterImage(int w, int h, Rgb fill = {255, 255, 255}) : width(w), height(h) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("RasterImage: non-positive dims");
        pixels.resize(static_cast<std::size_t>(w) * h * 3);
        for (std::size_t i = 0; i < pixels.size(); i += 3) {
            pixels[i] = fill.r;
            pixels[i + 1] = fill.g;
            pixels[i + 2] = fill.b;
        }
    }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }

    std::size_t index(int x, int y) const {
        return (static_cast<std::size_t>(y) * width + x) * 3;
    }

    Rgb get(int x, int y) const {
        const std::size_t i = index(x, y);
        return {pixels[i], pixels[i + 1], pixels[i + 2]};
    }

    void set(int x, int y, Rgb c) {
        const std::size_t i = index(x, y);
        pixels[i] = c.r;
        pixels[i + 1] = c.g;
        pixels[i + 2] = c.b;
    }

    void set_clipped(int x, int y, Rgb c) {
        if (in_bounds(x, y)) set(x, y, c);
    }

    bool operator==(const RasterImage&) const = default;
};

struct PointF {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const PointF&) const = default;
};

using Polyline = std::vector<PointF>;

/// Thick line segment via Bresenham with a square brush of the given width.
void draw_line(RasterImage& img, int x0, int y0, int x1, int y1, Rgb color, int width_px = 1);

/// Axis-aligned filled rectangle, clipped to the image.
void fill_rect(RasterImage& img, int x0, int y0, int x1, int y1, Rgb color);

/// Bilinear resize to the requested dimensions.
RasterImage resize_bilinear(const RasterImage& src, int out_w, int out_h);

/// FNV-1a digest of the pixel buffer (for determinism checks).
std::uint64_t image_digest(const RasterImage& img);

} // namespace ecggen
