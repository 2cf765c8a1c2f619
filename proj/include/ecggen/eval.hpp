#pragma once

#include <string>
#include <vector>

#include "ecggen/grid_renderer.hpp"
#include "ecggen/raster.hpp"
#include "ecggen/text_artifacts.hpp"

namespace ecggen {

/// Boolean trace mask, row-major.
struct TraceMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> mask;

    bool at(int x, int y) const { return mask[static_cast<std::size_t>(y) * width + x] != 0; }
};

/// Nearest-centroid classification in RGB: a pixel is trace iff it is
/// closer to trace_color than to the grid colors and the background.
TraceMask remove_grid(const RasterImage& img, const PaperSpec& spec);

/// Pixel region of one lead segment on the (unwarped) page.
struct TraceRegion {
    double x0 = 0, x1 = 0; // horizontal extent of the segment
    double y0 = 0, y1 = 0; // vertical search band
    double baseline_px = 0;
    double t_start_s = 0;
    double duration_s = 0;
};

/// Column-centroid trace extraction, converted to millivolts and resampled
/// to fs. Columns covered by occlusion boxes or lacking trace pixels are
/// filled by linear interpolation.
std::vector<double> extract_trace(const TraceMask& mask, const TraceRegion& region,
                                  const PaperSpec& spec, double fs,
                                  const std::vector<ArtifactBox>& occlusions = {});

/// 10*log10(sum ref^2 / sum (ref-est)^2); +inf when the error is zero.
double snr_db(const std::vector<double>& ref, const std::vector<double>& est);

struct MseResult {
    double mse_mv2 = 0.0;
    double rmse_mv = 0.0;
};
MseResult mse(const std::vector<double>& ref, const std::vector<double>& est);

struct LeadScore {
    std::string record_id;
    std::string lead_name;
    double snr_db = 0.0;
    double mse_mv2 = 0.0;
    double rmse_mv = 0.0;
};

struct EvalReport {
    std::vector<LeadScore> scores;
    double snr_mean_db = 0.0;
    double snr_std_db = 0.0;
    std::vector<std::size_t> histogram; // 1 dB bins starting at histogram_min_db
    double histogram_min_db = 0.0;
    double bin_width_db = 1.0;
};

EvalReport build_report(std::vector<LeadScore> scores, double bin_width_db = 1.0);

/// Reference mV series reconstructed exactly from a rendered polyline.
std::vector<double> polyline_to_series(const Polyline& pre_warp_polyline, double baseline_px,
                                       const PaperSpec& spec);

struct GroundTruthMeta; // pipeline sidecar

/// Digitize one generated image against its sidecar and score every lead.
/// Undoes the stored perspective matrix before grid removal.
std::vector<LeadScore> evaluate_image(const RasterImage& img, const GroundTruthMeta& meta);

/// Serialize the report (JSON) and its SNR histogram (CSV: bin_low,
/// bin_high, count).
std::string report_to_json(const EvalReport& report);
std::string histogram_to_csv(const EvalReport& report);

} // namespace ecggen
