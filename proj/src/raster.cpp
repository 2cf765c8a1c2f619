#include "ecggen/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace ecggen {

namespace {

void stamp_brush(RasterImage& img, int cx, int cy, Rgb color, int width_px) {
    if (width_px <= 1) {
        img.set_clipped(cx, cy, color);
        return;
    }
    const int lo = -(width_px - 1) / 2;
    const int hi = width_px / 2;
    for (int dy = lo; dy <= hi; ++dy)
        for (int dx = lo; dx <= hi; ++dx)
            img.set_clipped(cx + dx, cy + dy, color);
}

} // namespace

void draw_line(RasterImage& img, int x0, int y0, int x1, int y1, Rgb color, int width_px) {
    int dx = std::abs(x1 - x0);
    int dy = -std::abs(y1 - y0);
    int sx = x0 < x1 ? 1 : -1;
    int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        stamp_brush(img, x0, y0, color, width_px);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

void fill_rect(RasterImage& img, int x0, int y0, int x1, int y1, Rgb color) {
    const int ax = std::clamp(std::min(x0, x1), 0, img.width - 1);
    const int bx = std::clamp(std::max(x0, x1), 0, img.width - 1);
    const int ay = std::clamp(std::min(y0, y1), 0, img.height - 1);
    const int by = std::clamp(std::max(y0, y1), 0, img.height - 1);
    for (int y = ay; y <= by; ++y)
        for (int x = ax; x <= bx; ++x)
            img.set(x, y, color);
}

RasterImage resize_bilinear(const RasterImage& src, int out_w, int out_h) {
    if (out_w <= 0 || out_h <= 0) throw std::invalid_argument("resize_bilinear: bad dims");
    RasterImage out(out_w, out_h);
    const double sx = static_cast<double>(src.width) / out_w;
    const double sy = static_cast<double>(src.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        const double fy = std::min((y + 0.5) * sy - 0.5, src.height - 1.0);
        const int y0 = std::clamp(static_cast<int>(std::floor(fy)), 0, src.height - 1);
        const int y1 = std::min(y0 + 1, src.height - 1);
        const double wy = std::clamp(fy - y0, 0.0, 1.0);
        for (int x = 0; x < out_w; ++x) {
            const double fx = std::min((x + 0.5) * sx - 0.5, src.width - 1.0);
            const int x0 = std::clamp(static_cast<int>(std::floor(fx)), 0, src.width - 1);
            const int x1 = std::min(x0 + 1, src.width - 1);
            const double wx = std::clamp(fx - x0, 0.0, 1.0);
            Rgb out_c;
            const Rgb c00 = src.get(x0, y0), c10 = src.get(x1, y0);
            const Rgb c01 = src.get(x0, y1), c11 = src.get(x1, y1);
            auto lerp2 = [&](std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) {
                const double top = a + wx * (b - a);
                const double bot = c + wx * (d - c);
                return static_cast<std::uint8_t>(std::lround(std::clamp(top + wy * (bot - top), 0.0, 255.0)));
            };
            out_c.r = lerp2(c00.r, c10.r, c01.r, c11.r);
            out_c.g = lerp2(c00.g, c10.g, c01.g, c11.g);
            out_c.b = lerp2(c00.b, c10.b, c01.b, c11.b);
            out.set(x, y, out_c);
        }
    }
    return out;
}

std::uint64_t image_digest(const RasterImage& img) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ULL;
    };
    mix(static_cast<std::uint64_t>(img.width));
    mix(static_cast<std::uint64_t>(img.height));
    for (std::uint8_t b : img.pixels) mix(b);
    return h;
}

} // namespace ecggen
