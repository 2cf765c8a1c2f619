#pragma once

#include <cstdint>
#include <optional>

#include "ecggen/raster.hpp"

namespace ecggen {

struct NoiseSpec {
    double gaussian_eta = 0.0;  // std on the 8-bit scale
    double poisson_lambda = 0.0;
    double sp_p = 0.0;          // salt-and-pepper density
    std::optional<double> kelvin; // absent -> no tint
    bool poisson_centered = true;
    bool kelvin_paper_convention = true; // low K -> bluish, high K -> orangish

    void validate() const;
};

/// out = clamp(round(in + N(0, eta))) per channel, independent draws.
RasterImage add_gaussian_noise(const RasterImage& img, double eta, std::uint64_t seed);

/// out = clamp(in + Pois(lambda)) as written; centered subtracts round(lambda).
RasterImage add_poisson_noise(const RasterImage& img, double lambda, bool centered,
                              std::uint64_t seed);

/// Per pixel (all channels jointly): black with prob p/2, white with prob
/// p/2, unchanged otherwise.
RasterImage add_salt_pepper(const RasterImage& img, double p, std::uint64_t seed);

/// Reference-white channel gains from a blackbody fit of the given
/// temperature, normalized to max channel 1.
void kelvin_to_rgb_gains(double kelvin, double& gr, double& gg, double& gb);

/// Multiply channels by the white-point gains. paper_convention follows the
/// described orientation (low K bluish, high K orangish), which mirrors the
/// physical blackbody mapping.
RasterImage apply_color_temperature(const RasterImage& img, double kelvin,
                                    bool paper_convention = true);

/// All enabled NoiseSpec stages in order: gaussian, poisson, salt-pepper, tint.
RasterImage apply_imaging_noise(const RasterImage& img, const NoiseSpec& spec, std::uint64_t seed);

} // namespace ecggen
