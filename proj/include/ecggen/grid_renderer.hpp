#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ecggen/ecg_io.hpp"
#include "ecggen/raster.hpp"

namespace ecggen {

/// Physical-to-pixel mapping of the paper and colors of the rendered page.
struct PaperSpec {
    double dpi = 200.0;
    int width_px = 2200;
    int height_px = 1700;
    double mm_per_s = 25.0;
    double mm_per_mv = 10.0;
    double fine_grid_mm = 1.0;
    double coarse_grid_mm = 5.0;
    Rgb bg_color{255, 250, 245};
    Rgb fine_color{248, 190, 185};
    Rgb coarse_color{235, 125, 110};
    Rgb trace_color{25, 25, 30};
    int trace_width_px = 2;
    bool antialias = false;

    double px_per_mm() const { return dpi / 25.4; }
    double page_width_mm() const { return width_px / px_per_mm(); }
    double page_height_mm() const { return height_px / px_per_mm(); }
    void validate() const;
};

/// Placement of leads on the page: a rows x cols grid of consecutive time
/// windows plus an optional full-width rhythm strip on the last baseline.
struct LeadLayout {
    int rows = 3;
    int cols = 4;
    std::vector<std::string> order; // row-major
    std::optional<std::string> rhythm_lead;
    std::vector<double> row_baselines_mm; // from page top; rhythm strip uses the extra last entry
    double margin_left_mm = 8.0;
    double margin_right_mm = 8.0;
    double margin_top_mm = 10.0;
    double margin_bottom_mm = 10.0;

    void validate(const PaperSpec& spec) const;
};

/// Default 3x4 + rhythm-strip layout for the standard 12-lead set.
LeadLayout default_12lead_layout(const PaperSpec& spec, const std::string& rhythm_lead = "II");

/// Ground-truth geometry of one rendered lead segment.
struct LeadTrace {
    std::string lead_name;
    Polyline polyline;     // pixel vertices, one per rendered sample
    double baseline_px = 0.0;
    double cell_x0 = 0.0, cell_x1 = 0.0; // horizontal extent of the segment
    double t_start_s = 0.0;              // offset of the segment within the record
    double duration_s = 0.0;
    bool is_rhythm = false;
    bool clipped = false; // some trace pixels fell outside page bounds
};

double to_pixels(const PaperSpec& spec, double mm);

/// Background fill plus fine/coarse grid, coarse drawn over fine.
RasterImage render_blank_paper(const PaperSpec& spec);

/// Plot every layout lead (and the calibration pulse when requested) onto
/// img; returns the exact per-lead pixel polylines as ground truth.
std::vector<LeadTrace> plot_record(RasterImage& img, const EcgRecord& rec, const LeadLayout& layout,
                                   const PaperSpec& spec, bool with_pulse);

} // namespace ecggen
