#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ecggen/raster.hpp"

namespace ecggen {

struct CreaseSpec {
    int n = 3;
    double theta_deg = 135.0;
    double intensity = 0.35; // darkness in [0, 1]
    double sigma_px = 4.0;
    int line_width_px = 3;
    bool lighten = false; // scanner highlight instead of fold shadow

    void validate() const;
};

struct QuiltSpec {
    int block_px = 64;
    int overlap_px = 0; // 0 -> block_px / 6
    int out_w = 0;
    int out_h = 0;
    RasterImage seed_texture;
    std::uint64_t rng_seed = 0;
    int candidates = 20; // patch candidates scored per tile

    int effective_overlap() const { return overlap_px > 0 ? overlap_px : std::max(1, block_px / 6); }
    void validate() const;
};

/// Crease endpoints: start points advance along the top edge and then down
/// the right edge with gap (w + h) / (n + 1); each end point lies on the
/// line of inclination theta through its start, clipped to the page.
struct CreaseLines {
    std::vector<PointF> starts;
    std::vector<PointF> ends;          // after clipping to the page rectangle
    std::vector<PointF> unclipped_ends; // raw line-equation end points
};

CreaseLines generate_crease_lines(int n, double theta_deg, int w, int h);

/// Normalized 2-D Gaussian on a (2*radius+1)^2 grid; sums to 1.
std::vector<std::vector<double>> gaussian_kernel(double sigma_px, int radius);

/// Draw the crease lines into a mask, blur it, multiply the image down
/// (or up, when spec.lighten) by the blurred mask.
RasterImage apply_creases(const RasterImage& img, const CreaseSpec& spec);

/// Minimum vertical cut through the squared-difference surface of two
/// overlapping blocks. Returns one column index per row; ties resolve to
/// the smallest column.
std::vector<int> min_error_boundary_cut(const std::vector<std::vector<double>>& ov1,
                                        const std::vector<std::vector<double>>& ov2);

/// Overlap SSD surfaces straight from two image blocks (summed channels).
std::vector<std::vector<double>> block_difference_surface(const RasterImage& a, int ax, int ay,
                                                          const RasterImage& b, int bx, int by,
                                                          int w, int h);

/// Image quilting: raster-order tiling of seed-texture patches merged
/// along minimum-error boundary cuts.
RasterImage quilt_texture(const QuiltSpec& spec);

/// Multiplicative luminance modulation of img by the wrinkle texture
/// (texture luminance normalized to mean 1), mixed in with weight alpha.
RasterImage blend_wrinkles(const RasterImage& img, const RasterImage& texture, double alpha);

/// Procedural fractal-noise grayscale seed so the repo ships no image assets.
RasterImage make_noise_seed_texture(int w, int h, std::uint64_t seed);

} // namespace ecggen
