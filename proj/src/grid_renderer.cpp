#include "ecggen/grid_renderer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ecggen {

void PaperSpec::validate() const {
    if (dpi <= 0.0) throw std::runtime_error("PaperSpec: dpi must be positive");
    if (width_px <= 0 || height_px <= 0) throw std::runtime_error("PaperSpec: non-positive page size");
    if (!(fine_grid_mm > 0.0 && fine_grid_mm < coarse_grid_mm))
        throw std::runtime_error("PaperSpec: need 0 < fine_grid_mm < coarse_grid_mm");
    const double ratio = coarse_grid_mm / fine_grid_mm;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw std::runtime_error("PaperSpec: coarse_grid_mm must be an integer multiple of fine_grid_mm");
    if (mm_per_s <= 0.0 || mm_per_mv <= 0.0)
        throw std::runtime_error("PaperSpec: scale constants must be positive");
    if (trace_width_px < 1) throw std::runtime_error("PaperSpec: trace_width_px must be >= 1");
    const double coarse_px = coarse_grid_mm * px_per_mm();
    if (width_px < coarse_px || height_px < coarse_px)
        throw std::runtime_error("PaperSpec: page smaller than one coarse grid cell");
}

void LeadLayout::validate(const PaperSpec& spec) const {
    if (rows <= 0 || cols <= 0) throw std::runtime_error("LeadLayout: non-positive grid");
    if (order.empty()) throw std::runtime_error("LeadLayout: empty lead order");
    if (static_cast<int>(order.size()) > rows * cols)
        throw std::runtime_error("LeadLayout: more leads than grid cells");
    std::set<std::string> seen;
    for (const std::string& n : order)
        if (!seen.insert(n).second) throw std::runtime_error("LeadLayout: duplicate lead '" + n + "'");
    const std::size_t expected = static_cast<std::size_t>(rows) + (rhythm_lead ? 1 : 0);
    if (row_baselines_mm.size() != expected)
        throw std::runtime_error("LeadLayout: expected " + std::to_string(expected) + " baselines");
    double prev = margin_top_mm;
    for (double b : row_baselines_mm) {
        if (b <= prev) throw std::runtime_error("LeadLayout: baselines must be strictly increasing");
        prev = b;
    }
    if (prev >= spec.page_height_mm() - margin_bottom_mm)
        throw std::runtime_error("LeadLayout: baselines exceed bottom margin");
}

LeadLayout default_12lead_layout(const PaperSpec& spec, const std::string& rhythm_lead) {
    LeadLayout layout;
    layout.order = {"I",   "aVR", "V1", "V4", "II",  "aVL",
                    "V2",  "V5",  "III", "aVF", "V3", "V6"};
    layout.rhythm_lead = rhythm_lead;
    const double usable = spec.page_height_mm() - layout.margin_top_mm - layout.margin_bottom_mm;
    const int bands = layout.rows + 1;
    for (int r = 0; r < bands; ++r)
        layout.row_baselines_mm.push_back(layout.margin_top_mm + usable * (r + 0.5) / bands);
    return layout;
}

double to_pixels(const PaperSpec& spec, double mm) {
    return mm * spec.dpi / 25.4;
}

namespace {

void draw_grid_lines(RasterImage& img, const PaperSpec& spec, double pitch_mm, Rgb color, int width) {
    const double pitch_px = to_pixels(spec, pitch_mm);
    for (int k = 0;; ++k) {
        const int x = static_cast<int>(std::lround(k * pitch_px));
        if (x >= img.width) break;
        fill_rect(img, x, 0, std::min(x + width - 1, img.width - 1), img.height - 1, color);
    }
    for (int k = 0;; ++k) {
        const int y = static_cast<int>(std::lround(k * pitch_px));
        if (y >= img.height) break;
        fill_rect(img, 0, y, img.width - 1, std::min(y + width - 1, img.height - 1), color);
    }
}

void draw_polyline(RasterImage& img, const Polyline& pts, Rgb color, int width) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        draw_line(img, static_cast<int>(std::lround(pts[i].x)), static_cast<int>(std::lround(pts[i].y)),
                  static_cast<int>(std::lround(pts[i + 1].x)),
                  static_cast<int>(std::lround(pts[i + 1].y)), color, width);
    }
    if (pts.size() == 1)
        draw_line(img, static_cast<int>(std::lround(pts[0].x)), static_cast<int>(std::lround(pts[0].y)),
                  static_cast<int>(std::lround(pts[0].x)), static_cast<int>(std::lround(pts[0].y)),
                  color, width);
}

void draw_calibration_pulse(RasterImage& img, const PaperSpec& spec, double x0, double baseline) {
    const double top = baseline - to_pixels(spec, spec.mm_per_mv);           // 1 mV up
    const double x1 = x0 + to_pixels(spec, 0.2 * spec.mm_per_s);             // 0.2 s wide
    const int ix0 = static_cast<int>(std::lround(x0));
    const int ix1 = static_cast<int>(std::lround(x1));
    const int ib = static_cast<int>(std::lround(baseline));
    const int it = static_cast<int>(std::lround(top));
    draw_line(img, ix0, ib, ix0, it, spec.trace_color, spec.trace_width_px);
    draw_line(img, ix0, it, ix1, it, spec.trace_color, spec.trace_width_px);
    draw_line(img, ix1, it, ix1, ib, spec.trace_color, spec.trace_width_px);
}

LeadTrace build_trace(const Lead& lead, const EcgRecord& rec, const PaperSpec& spec, double cell_x0,
                      double baseline_px, double t_start, double duration, bool is_rhythm) {
    LeadTrace trace;
    trace.lead_name = lead.name;
    trace.baseline_px = baseline_px;
    trace.cell_x0 = cell_x0;
    trace.cell_x1 = cell_x0 + to_pixels(spec, spec.mm_per_s * duration);
    trace.t_start_s = t_start;
    trace.duration_s = duration;
    trace.is_rhythm = is_rhythm;

    const auto k0 = static_cast<std::size_t>(std::llround(t_start * rec.fs));
    auto k1 = static_cast<std::size_t>(std::llround((t_start + duration) * rec.fs));
    k1 = std::min(k1, rec.sample_count());
    trace.polyline.reserve(k1 - k0);
    for (std::size_t k = k0; k < k1; ++k) {
        const double t = static_cast<double>(k) / rec.fs - t_start;
        const double x = cell_x0 + to_pixels(spec, spec.mm_per_s * t);
        const double y = baseline_px - to_pixels(spec, spec.mm_per_mv * lead.samples[k]);
        if (x < 0.0 || x >= spec.width_px || y < 0.0 || y >= spec.height_px) trace.clipped = true;
        trace.polyline.push_back({x, y});
    }
    return trace;
}

} // namespace

RasterImage render_blank_paper(const PaperSpec& spec) {
    spec.validate();
    const double coarse_px = to_pixels(spec, spec.coarse_grid_mm);
    if (spec.width_px < coarse_px || spec.height_px < coarse_px)
        throw std::runtime_error("render_blank_paper: page smaller than one coarse grid cell");

    RasterImage img(spec.width_px, spec.height_px, spec.bg_color);
    const int fine_w = std::max(1, static_cast<int>(std::lround(spec.dpi / 200.0)));
    const int coarse_w = std::max(1, static_cast<int>(std::lround(2.0 * spec.dpi / 200.0)));
    draw_grid_lines(img, spec, spec.fine_grid_mm, spec.fine_color, fine_w);
    draw_grid_lines(img, spec, spec.coarse_grid_mm, spec.coarse_color, coarse_w);
    return img;
}

std::vector<LeadTrace> plot_record(RasterImage& img, const EcgRecord& rec, const LeadLayout& layout,
                                   const PaperSpec& spec, bool with_pulse) {
    spec.validate();
    rec.validate();
    layout.validate(spec);
    for (const std::string& name : layout.order)
        if (!rec.find_lead(name))
            throw std::runtime_error("plot_record: layout lead '" + name + "' not in record");
    if (layout.rhythm_lead && !rec.find_lead(*layout.rhythm_lead))
        throw std::runtime_error("plot_record: rhythm lead '" + *layout.rhythm_lead + "' not in record");

    const double margin_left_px = to_pixels(spec, layout.margin_left_mm);
    const double pulse_span_px = with_pulse ? to_pixels(spec, 0.2 * spec.mm_per_s + 2.0) : 0.0;
    const double plot_x0 = margin_left_px + pulse_span_px;
    const double cell_dur = rec.duration_s / layout.cols;
    const double cell_w_px = to_pixels(spec, spec.mm_per_s * cell_dur);
    const double right_limit = spec.width_px - to_pixels(spec, layout.margin_right_mm);
    if (plot_x0 + layout.cols * cell_w_px > right_limit + 0.5)
        throw std::runtime_error("plot_record: lead cells exceed page width");

    std::vector<LeadTrace> traces;
    for (int r = 0; r < layout.rows; ++r) {
        const double baseline = to_pixels(spec, layout.row_baselines_mm[r]);
        if (with_pulse) draw_calibration_pulse(img, spec, margin_left_px, baseline);
        for (int c = 0; c < layout.cols; ++c) {
            const std::size_t idx = static_cast<std::size_t>(r) * layout.cols + c;
            if (idx >= layout.order.size()) continue;
            const Lead* lead = rec.find_lead(layout.order[idx]);
            LeadTrace trace = build_trace(*lead, rec, spec, plot_x0 + c * cell_w_px, baseline,
                                          c * cell_dur, cell_dur, false);
            draw_polyline(img, trace.polyline, spec.trace_color, spec.trace_width_px);
            traces.push_back(std::move(trace));
        }
    }
    if (layout.rhythm_lead) {
        const double baseline = to_pixels(spec, layout.row_baselines_mm[layout.rows]);
        if (with_pulse) draw_calibration_pulse(img, spec, margin_left_px, baseline);
        const Lead* lead = rec.find_lead(*layout.rhythm_lead);
        LeadTrace trace =
            build_trace(*lead, rec, spec, plot_x0, baseline, 0.0, rec.duration_s, true);
        draw_polyline(img, trace.polyline, spec.trace_color, spec.trace_width_px);
        traces.push_back(std::move(trace));
    }
    return traces;
}

} // namespace ecggen
