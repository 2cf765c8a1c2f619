#include "ecggen/crease_wrinkle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ecggen/rng.hpp"

namespace ecggen {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Intersection of the infinite line through `a` toward `b` with the page
// rectangle [0,w] x [0,h]. Falls back to the (possibly degenerate) point
// a when the line misses the rectangle.
std::pair<PointF, PointF> clip_line_to_page(PointF a, PointF b, double w, double h) {
    double dx = b.x - a.x;
    double dy = b.y - a.y;
    if (dx == 0.0 && dy == 0.0) return {a, a};
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    auto clip_axis = [&](double d, double lo_dist, double hi_dist) {
        if (d == 0.0) return lo_dist <= 0.0 && hi_dist >= 0.0;
        double ta = lo_dist / d;
        double tb = hi_dist / d;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        return true;
    };
    if (!clip_axis(dx, 0.0 - a.x, w - a.x) || !clip_axis(dy, 0.0 - a.y, h - a.y) || t0 > t1)
        return {a, a};
    return {{a.x + t0 * dx, a.y + t0 * dy}, {a.x + t1 * dx, a.y + t1 * dy}};
}

void stamp_mask(std::vector<double>& mask, int w, int h, int cx, int cy, double value, int width_px) {
    const int lo = -(width_px - 1) / 2;
    const int hi = width_px / 2;
    for (int dy = lo; dy <= hi; ++dy)
        for (int dx = lo; dx <= hi; ++dx) {
            const int x = cx + dx, y = cy + dy;
            if (x >= 0 && x < w && y >= 0 && y < h)
                mask[static_cast<std::size_t>(y) * w + x] = std::max(mask[static_cast<std::size_t>(y) * w + x], value);
        }
}

void draw_mask_line(std::vector<double>& mask, int w, int h, PointF a, PointF b, double value,
                    int width_px) {
    int x0 = static_cast<int>(std::lround(a.x)), y0 = static_cast<int>(std::lround(a.y));
    const int x1 = static_cast<int>(std::lround(b.x)), y1 = static_cast<int>(std::lround(b.y));
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        stamp_mask(mask, w, h, x0, y0, value, width_px);
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

std::vector<double> gaussian_kernel_1d(double sigma, int radius) {
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

void blur_mask(std::vector<double>& mask, int w, int h, double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    const std::vector<double> k = gaussian_kernel_1d(sigma, radius);
    std::vector<double> tmp(mask.size(), 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double s = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int xx = std::clamp(x + i, 0, w - 1);
                s += k[i + radius] * mask[static_cast<std::size_t>(y) * w + xx];
            }
            tmp[static_cast<std::size_t>(y) * w + x] = s;
        }
    for (int x = 0; x < w; ++x)
        for (int y = 0; y < h; ++y) {
            double s = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int yy = std::clamp(y + i, 0, h - 1);
                s += k[i + radius] * tmp[static_cast<std::size_t>(yy) * w + x];
            }
            mask[static_cast<std::size_t>(y) * w + x] = s;
        }
}

double luminance(Rgb c) {
    return (static_cast<double>(c.r) + c.g + c.b) / 3.0;
}

} // namespace

void CreaseSpec::validate() const {
    if (n < 0) throw std::runtime_error("CreaseSpec: n must be >= 0");
    if (!(theta_deg > 0.0 && theta_deg < 180.0))
        throw std::runtime_error("CreaseSpec: theta_deg must be in (0, 180)");
    if (!(intensity >= 0.0 && intensity <= 1.0))
        throw std::runtime_error("CreaseSpec: intensity must be in [0, 1]");
    if (sigma_px < 0.0) throw std::runtime_error("CreaseSpec: sigma_px must be >= 0");
    if (line_width_px < 1) throw std::runtime_error("CreaseSpec: line_width_px must be >= 1");
}

void QuiltSpec::validate() const {
    if (block_px <= 0) throw std::runtime_error("QuiltSpec: block_px must be positive");
    const int ov = effective_overlap();
    if (!(ov > 0 && ov < block_px))
        throw std::runtime_error("QuiltSpec: need 0 < overlap_px < block_px");
    if (out_w < block_px || out_h < block_px)
        throw std::runtime_error("QuiltSpec: output must be at least block_px in both dims");
    if (seed_texture.width < block_px || seed_texture.height < block_px)
        throw std::runtime_error("QuiltSpec: seed texture smaller than block");
    if (candidates < 1) throw std::runtime_error("QuiltSpec: candidates must be >= 1");
}

CreaseLines generate_crease_lines(int n, double theta_deg, int w, int h) {
    if (n < 0) throw std::runtime_error("generate_crease_lines: n must be >= 0");
    if (w <= 0 || h <= 0) throw std::runtime_error("generate_crease_lines: page dims must be positive");
    CreaseLines out;
    if (n == 0) return out;

    const double gap = static_cast<double>(w + h) / (n + 1);
    // Start points walk the top edge left-to-right, then the right edge
    // top-to-bottom, consecutive points exactly `gap` apart in edge arc length.
    for (int i = 1; i <= n; ++i) {
        const double s = gap * i;
        if (s < static_cast<double>(w))
            out.starts.push_back({s, 0.0});
        else
            out.starts.push_back({static_cast<double>(w), s - w});
    }

    const bool vertical = std::abs(theta_deg - 90.0) < 1e-12;
    const double m = vertical ? 0.0 : std::tan(kPi - theta_deg * kPi / 180.0);
    for (const PointF& p : out.starts) {
        PointF raw_end;
        if (vertical) {
            raw_end = {p.x, static_cast<double>(h)}; // m undefined; vertical line family limit
        } else {
            const double c = p.y - m * p.x;
            raw_end = {0.0, c}; // x_e = 0 as written
        }
        out.unclipped_ends.push_back(raw_end);
        const auto [a, b] = clip_line_to_page(p, raw_end, w, h);
        // Keep the far endpoint of the on-page span as the crease end.
        const double da = std::hypot(a.x - p.x, a.y - p.y);
        const double db = std::hypot(b.x - p.x, b.y - p.y);
        out.ends.push_back(da > db ? a : b);
    }
    return out;
}

std::vector<std::vector<double>> gaussian_kernel(double sigma_px, int radius) {
    if (sigma_px <= 0.0) throw std::runtime_error("gaussian_kernel: sigma must be positive");
    if (radius < 1) throw std::runtime_error("gaussian_kernel: radius must be >= 1");
    std::vector<std::vector<double>> k(2 * radius + 1, std::vector<double>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i)
        for (int j = -radius; j <= radius; ++j) {
            const double v = std::exp(-(static_cast<double>(i) * i + static_cast<double>(j) * j) /
                                      (2.0 * sigma_px * sigma_px));
            k[i + radius][j + radius] = v;
            sum += v;
        }
    for (auto& row : k)
        for (double& v : row) v /= sum;
    return k;
}

RasterImage apply_creases(const RasterImage& img, const CreaseSpec& spec) {
    spec.validate();
    if (spec.n == 0 || spec.intensity == 0.0) return img;

    const int w = img.width, h = img.height;
    std::vector<double> mask(static_cast<std::size_t>(w) * h, 0.0);
    const CreaseLines lines = generate_crease_lines(spec.n, spec.theta_deg, w, h);
    for (std::size_t i = 0; i < lines.starts.size(); ++i)
        draw_mask_line(mask, w, h, lines.starts[i], lines.ends[i], spec.intensity, spec.line_width_px);
    if (spec.sigma_px > 0.0) {
        // Separable passes; equivalent to convolving with the 2-D kernel.
        // Rescale so the crease core keeps the requested darkness after blur.
        blur_mask(mask, w, h, spec.sigma_px);
        const double peak = *std::max_element(mask.begin(), mask.end());
        if (peak > 0.0) {
            const double scale = spec.intensity / peak;
            for (double& v : mask) v = std::min(1.0, v * scale);
        }
    }

    RasterImage out = img;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double f = mask[static_cast<std::size_t>(y) * w + x];
            if (f <= 0.0) continue;
            Rgb c = out.get(x, y);
            auto apply = [&](std::uint8_t v) {
                const double shifted = spec.lighten ? v + (255.0 - v) * f : v * (1.0 - f);
                return static_cast<std::uint8_t>(std::lround(std::clamp(shifted, 0.0, 255.0)));
            };
            out.set(x, y, {apply(c.r), apply(c.g), apply(c.b)});
        }
    return out;
}

std::vector<int> min_error_boundary_cut(const std::vector<std::vector<double>>& ov1,
                                        const std::vector<std::vector<double>>& ov2) {
    const std::size_t rows = ov1.size();
    if (rows == 0 || ov2.size() != rows)
        throw std::runtime_error("min_error_boundary_cut: row count mismatch or empty");
    const std::size_t cols = ov1[0].size();
    for (std::size_t i = 0; i < rows; ++i)
        if (ov1[i].size() != cols || ov2[i].size() != cols)
            throw std::runtime_error("min_error_boundary_cut: column count mismatch");

    std::vector<std::vector<double>> E(rows, std::vector<double>(cols));
    for (std::size_t j = 0; j < cols; ++j) {
        const double d = ov1[0][j] - ov2[0][j];
        E[0][j] = d * d;
    }
    for (std::size_t i = 1; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            const double d = ov1[i][j] - ov2[i][j];
            double best = E[i - 1][j];
            if (j > 0) best = std::min(best, E[i - 1][j - 1]);
            if (j + 1 < cols) best = std::min(best, E[i - 1][j + 1]);
            E[i][j] = d * d + best;
        }

    std::vector<int> path(rows);
    std::size_t j = 0;
    for (std::size_t c = 1; c < cols; ++c)
        if (E[rows - 1][c] < E[rows - 1][j]) j = c; // ties keep the smallest index
    path[rows - 1] = static_cast<int>(j);
    for (std::size_t i = rows - 1; i > 0; --i) {
        const std::size_t lo = j > 0 ? j - 1 : 0;
        const std::size_t hi = std::min(j + 1, cols - 1);
        std::size_t bestj = lo;
        for (std::size_t c = lo + 1; c <= hi; ++c)
            if (E[i - 1][c] < E[i - 1][bestj]) bestj = c;
        j = bestj;
        path[i - 1] = static_cast<int>(j);
    }
    return path;
}

std::vector<std::vector<double>> block_difference_surface(const RasterImage& a, int ax, int ay,
                                                          const RasterImage& b, int bx, int by,
                                                          int w, int h) {
    std::vector<std::vector<double>> e(h, std::vector<double>(w, 0.0));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const Rgb ca = a.get(ax + x, ay + y);
            const Rgb cb = b.get(bx + x, by + y);
            const double dr = static_cast<double>(ca.r) - cb.r;
            const double dg = static_cast<double>(ca.g) - cb.g;
            const double db = static_cast<double>(ca.b) - cb.b;
            e[y][x] = dr * dr + dg * dg + db * db;
        }
    return e;
}

namespace {

double overlap_ssd(const RasterImage& out, const RasterImage& seed, int tx, int ty, int rx, int ry,
                   int tw, int th, int overlap, bool has_left, bool has_top) {
    double ssd = 0.0;
    auto add = [&](int x0, int y0, int w, int h) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const Rgb a = out.get(tx + x0 + x, ty + y0 + y);
                const Rgb b = seed.get(rx + x0 + x, ry + y0 + y);
                const double dr = static_cast<double>(a.r) - b.r;
                const double dg = static_cast<double>(a.g) - b.g;
                const double db = static_cast<double>(a.b) - b.b;
                ssd += dr * dr + dg * dg + db * db;
            }
    };
    if (has_left) add(0, 0, std::min(overlap, tw), th);
    if (has_top) add(has_left ? std::min(overlap, tw) : 0, 0,
                     tw - (has_left ? std::min(overlap, tw) : 0), std::min(overlap, th));
    return ssd;
}

} // namespace

RasterImage quilt_texture(const QuiltSpec& spec) {
    spec.validate();
    const int block = spec.block_px;
    const int overlap = spec.effective_overlap();
    const int stride = block - overlap;
    const RasterImage& seed = spec.seed_texture;
    Rng rng(spec.rng_seed);

    RasterImage out(spec.out_w, spec.out_h, {0, 0, 0});
    for (int ty = 0; ty < spec.out_h; ty += stride) {
        const int th = std::min(block, spec.out_h - ty);
        if (th <= 0) break;
        for (int tx = 0; tx < spec.out_w; tx += stride) {
            const int tw = std::min(block, spec.out_w - tx);
            if (tw <= 0) break;
            const bool has_left = tx > 0;
            const bool has_top = ty > 0;

            int rx = 0, ry = 0;
            if (!has_left && !has_top) {
                rx = static_cast<int>(rng.next_int(0, seed.width - tw));
                ry = static_cast<int>(rng.next_int(0, seed.height - th));
            } else {
                double best = std::numeric_limits<double>::infinity();
                for (int s = 0; s < spec.candidates; ++s) {
                    const int cx = static_cast<int>(rng.next_int(0, seed.width - tw));
                    const int cy = static_cast<int>(rng.next_int(0, seed.height - th));
                    const double ssd =
                        overlap_ssd(out, seed, tx, ty, cx, cy, tw, th, overlap, has_left, has_top);
                    if (ssd < best) {
                        best = ssd;
                        rx = cx;
                        ry = cy;
                    }
                }
            }

            std::vector<int> vcut, hcut;
            if (has_left) {
                const int ow = std::min(overlap, tw);
                std::vector<std::vector<double>> ov1(th, std::vector<double>(ow));
                std::vector<std::vector<double>> ov2(th, std::vector<double>(ow));
                for (int y = 0; y < th; ++y)
                    for (int x = 0; x < ow; ++x) {
                        ov1[y][x] = luminance(out.get(tx + x, ty + y));
                        ov2[y][x] = luminance(seed.get(rx + x, ry + y));
                    }
                vcut = min_error_boundary_cut(ov1, ov2);
            }
            if (has_top) {
                const int oh = std::min(overlap, th);
                // Transposed: one row index per column.
                std::vector<std::vector<double>> ov1(tw, std::vector<double>(oh));
                std::vector<std::vector<double>> ov2(tw, std::vector<double>(oh));
                for (int x = 0; x < tw; ++x)
                    for (int y = 0; y < oh; ++y) {
                        ov1[x][y] = luminance(out.get(tx + x, ty + y));
                        ov2[x][y] = luminance(seed.get(rx + x, ry + y));
                    }
                hcut = min_error_boundary_cut(ov1, ov2);
            }

            for (int y = 0; y < th; ++y)
                for (int x = 0; x < tw; ++x) {
                    bool use_new = true;
                    if (has_left && x < overlap) use_new = use_new && x >= vcut[y];
                    if (has_top && y < overlap) use_new = use_new && y >= hcut[x];
                    if (use_new) out.set(tx + x, ty + y, seed.get(rx + x, ry + y));
                }
        }
    }
    return out;
}

RasterImage blend_wrinkles(const RasterImage& img, const RasterImage& texture, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::runtime_error("blend_wrinkles: alpha out of [0, 1]");
    RasterImage tex = texture;
    if (tex.width != img.width || tex.height != img.height)
        tex = resize_bilinear(tex, img.width, img.height);
    if (alpha == 0.0) return img;

    double mean = 0.0;
    for (int y = 0; y < tex.height; ++y)
        for (int x = 0; x < tex.width; ++x) mean += luminance(tex.get(x, y));
    mean /= static_cast<double>(tex.width) * tex.height;
    if (mean <= 0.0) throw std::runtime_error("blend_wrinkles: texture has zero mean luminance");

    RasterImage out = img;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const double f = luminance(tex.get(x, y)) / mean;
            const Rgb c = img.get(x, y);
            auto mixc = [&](std::uint8_t v) {
                const double modulated = std::clamp(v * f, 0.0, 255.0);
                return static_cast<std::uint8_t>(
                    std::lround(std::clamp((1.0 - alpha) * v + alpha * modulated, 0.0, 255.0)));
            };
            out.set(x, y, {mixc(c.r), mixc(c.g), mixc(c.b)});
        }
    return out;
}

RasterImage make_noise_seed_texture(int w, int h, std::uint64_t seed) {
    if (w <= 0 || h <= 0) throw std::runtime_error("make_noise_seed_texture: bad dims");
    std::vector<double> acc(static_cast<std::size_t>(w) * h, 0.0);
    double amp = 1.0;
    double total_amp = 0.0;
    // Value noise octaves, stretched horizontally for a paper-fiber look.
    for (int octave = 0; octave < 4; ++octave) {
        const int cells_y = 4 << octave;
        const int cells_x = std::max(2, cells_y / 2);
        std::vector<double> lattice(static_cast<std::size_t>(cells_x + 1) * (cells_y + 1));
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(octave), 0x7465784dULL));
        for (double& v : lattice) v = rng.next_double();
        for (int y = 0; y < h; ++y) {
            const double fy = static_cast<double>(y) / h * cells_y;
            const int y0 = std::min(static_cast<int>(fy), cells_y - 1);
            const double wy = fy - y0;
            const double sy = wy * wy * (3.0 - 2.0 * wy);
            for (int x = 0; x < w; ++x) {
                const double fx = static_cast<double>(x) / w * cells_x;
                const int x0 = std::min(static_cast<int>(fx), cells_x - 1);
                const double wx = fx - x0;
                const double sx = wx * wx * (3.0 - 2.0 * wx);
                const auto at = [&](int cx, int cy) {
                    return lattice[static_cast<std::size_t>(cy) * (cells_x + 1) + cx];
                };
                const double top = at(x0, y0) + sx * (at(x0 + 1, y0) - at(x0, y0));
                const double bot = at(x0, y0 + 1) + sx * (at(x0 + 1, y0 + 1) - at(x0, y0 + 1));
                acc[static_cast<std::size_t>(y) * w + x] += amp * (top + sy * (bot - top));
            }
        }
        total_amp += amp;
        amp *= 0.55;
    }
    RasterImage out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double v = acc[static_cast<std::size_t>(y) * w + x] / total_amp;
            // Center around mid-gray with moderate contrast.
            const auto g = static_cast<std::uint8_t>(
                std::lround(std::clamp(128.0 + (v - 0.5) * 170.0, 0.0, 255.0)));
            out.set(x, y, {g, g, g});
        }
    return out;
}

} // namespace ecggen
