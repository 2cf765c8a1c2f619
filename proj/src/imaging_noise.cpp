#include "ecggen/imaging_noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ecggen/rng.hpp"

namespace ecggen {

namespace {

std::uint8_t clamp8(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

constexpr std::uint64_t kGaussTag = 0x67617573ULL;
constexpr std::uint64_t kPoisTag = 0x706f6973ULL;
constexpr std::uint64_t kSpTag = 0x73616c74ULL;

} // namespace

void NoiseSpec::validate() const {
    if (gaussian_eta < 0.0) throw std::runtime_error("NoiseSpec: gaussian_eta must be >= 0");
    if (poisson_lambda < 0.0) throw std::runtime_error("NoiseSpec: poisson_lambda must be >= 0");
    if (!(sp_p >= 0.0 && sp_p <= 1.0)) throw std::runtime_error("NoiseSpec: sp_p must be in [0, 1]");
    if (kelvin && !(*kelvin >= 1000.0 && *kelvin <= 40000.0))
        throw std::runtime_error("NoiseSpec: kelvin must be in [1000, 40000]");
}

RasterImage add_gaussian_noise(const RasterImage& img, double eta, std::uint64_t seed) {
    if (eta < 0.0) throw std::runtime_error("add_gaussian_noise: eta must be >= 0");
    if (eta == 0.0) return img;
    RasterImage out = img;
    for (int y = 0; y < img.height; ++y) {
        // Per-row substream keeps results invariant under row-parallel execution.
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(y), kGaussTag));
        for (int x = 0; x < img.width; ++x) {
            const Rgb c = img.get(x, y);
            out.set(x, y, {clamp8(c.r + eta * rng.next_normal()), clamp8(c.g + eta * rng.next_normal()),
                           clamp8(c.b + eta * rng.next_normal())});
        }
    }
    return out;
}

RasterImage add_poisson_noise(const RasterImage& img, double lambda, bool centered,
                              std::uint64_t seed) {
    if (lambda < 0.0) throw std::runtime_error("add_poisson_noise: lambda must be >= 0");
    if (lambda == 0.0) return img;
    const double offset = centered ? std::round(lambda) : 0.0;
    RasterImage out = img;
    for (int y = 0; y < img.height; ++y) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(y), kPoisTag));
        for (int x = 0; x < img.width; ++x) {
            const Rgb c = img.get(x, y);
            auto lift = [&](std::uint8_t v) {
                return clamp8(v + static_cast<double>(rng.next_poisson(lambda)) - offset);
            };
            out.set(x, y, {lift(c.r), lift(c.g), lift(c.b)});
        }
    }
    return out;
}

RasterImage add_salt_pepper(const RasterImage& img, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::runtime_error("add_salt_pepper: p must be in [0, 1]");
    if (p == 0.0) return img;
    RasterImage out = img;
    for (int y = 0; y < img.height; ++y) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(y), kSpTag));
        for (int x = 0; x < img.width; ++x) {
            const double u = rng.next_double();
            if (u < p / 2.0)
                out.set(x, y, {0, 0, 0});
            else if (u < p)
                out.set(x, y, {255, 255, 255});
        }
    }
    return out;
}

void kelvin_to_rgb_gains(double kelvin, double& gr, double& gg, double& gb) {
    // Piecewise log/power fit of the blackbody locus (Tanner Helland's
    // tabulated coefficients), valid for 1000-40000 K.
    const double t = kelvin / 100.0;
    double r, g, b;
    if (t <= 66.0) {
        r = 255.0;
        g = 99.4708025861 * std::log(t) - 161.1195681661;
    } else {
        r = 329.698727446 * std::pow(t - 60.0, -0.1332047592);
        g = 288.1221695283 * std::pow(t - 60.0, -0.0755148492);
    }
    if (t >= 66.0)
        b = 255.0;
    else if (t <= 19.0)
        b = 0.0;
    else
        b = 138.5177312231 * std::log(t - 10.0) - 305.0447927307;

    r = std::clamp(r, 0.0, 255.0);
    g = std::clamp(g, 0.0, 255.0);
    b = std::clamp(b, 0.0, 255.0);
    const double m = std::max({r, g, b, 1.0});
    gr = r / m;
    gg = g / m;
    gb = b / m;
}

RasterImage apply_color_temperature(const RasterImage& img, double kelvin, bool paper_convention) {
    if (!(kelvin >= 1000.0 && kelvin <= 40000.0))
        throw std::runtime_error("apply_color_temperature: kelvin must be in [1000, 40000]");
    // The stated convention (low K bluish, high K orangish) is the mirror
    // image of the physical blackbody scale.
    const double physical_k = paper_convention ? 41000.0 - kelvin : kelvin;
    double gr, gg, gb;
    kelvin_to_rgb_gains(physical_k, gr, gg, gb);
    RasterImage out = img;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const Rgb c = img.get(x, y);
            out.set(x, y, {clamp8(c.r * gr), clamp8(c.g * gg), clamp8(c.b * gb)});
        }
    return out;
}

RasterImage apply_imaging_noise(const RasterImage& img, const NoiseSpec& spec, std::uint64_t seed) {
    spec.validate();
    RasterImage out = img;
    if (spec.gaussian_eta > 0.0) out = add_gaussian_noise(out, spec.gaussian_eta, derive_seed(seed, 1));
    if (spec.poisson_lambda > 0.0)
        out = add_poisson_noise(out, spec.poisson_lambda, spec.poisson_centered, derive_seed(seed, 2));
    if (spec.sp_p > 0.0) out = add_salt_pepper(out, spec.sp_p, derive_seed(seed, 3));
    if (spec.kelvin) out = apply_color_temperature(out, *spec.kelvin, spec.kelvin_paper_convention);
    return out;
}

} // namespace ecggen
