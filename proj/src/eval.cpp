#include "ecggen/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ecggen/geometry.hpp"
#include "ecggen/pipeline.hpp"

namespace ecggen {

namespace {

double color_dist2(Rgb a, Rgb b) {
    const double dr = static_cast<double>(a.r) - b.r;
    const double dg = static_cast<double>(a.g) - b.g;
    const double db = static_cast<double>(a.b) - b.b;
    return dr * dr + dg * dg + db * db;
}

} // namespace

TraceMask remove_grid(const RasterImage& img, const PaperSpec& spec) {
    TraceMask out;
    out.width = img.width;
    out.height = img.height;
    out.mask.assign(static_cast<std::size_t>(img.width) * img.height, 0);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const Rgb c = img.get(x, y);
            const double dt = color_dist2(c, spec.trace_color);
            if (dt < color_dist2(c, spec.fine_color) && dt < color_dist2(c, spec.coarse_color) &&
                dt < color_dist2(c, spec.bg_color))
                out.mask[static_cast<std::size_t>(y) * img.width + x] = 1;
        }
    return out;
}

std::vector<double> extract_trace(const TraceMask& mask, const TraceRegion& region,
                                  const PaperSpec& spec, double fs,
                                  const std::vector<ArtifactBox>& occlusions) {
    const int cx0 = std::max(0, static_cast<int>(std::ceil(region.x0)));
    const int cx1 = std::min(mask.width - 1, static_cast<int>(std::floor(region.x1)));
    const int cy0 = std::max(0, static_cast<int>(std::ceil(region.y0)));
    const int cy1 = std::min(mask.height - 1, static_cast<int>(std::floor(region.y1)));
    if (cx1 < cx0 || cy1 < cy0) throw std::runtime_error("extract_trace: empty region");

    const int ncols = cx1 - cx0 + 1;
    std::vector<double> col_y(ncols, std::numeric_limits<double>::quiet_NaN());
    bool any = false;
    for (int c = 0; c < ncols; ++c) {
        const int x = cx0 + c;
        // Only mask out the covered pixels; trace ink above or below an
        // annotation still yields a centroid for this column.
        std::vector<const ArtifactBox*> covering;
        for (const ArtifactBox& b : occlusions)
            if (x >= b.x0 && x <= b.x1 && b.y0 <= cy1 && b.y1 >= cy0) covering.push_back(&b);
        double sum = 0.0;
        int count = 0;
        for (int y = cy0; y <= cy1; ++y) {
            if (!mask.at(x, y)) continue;
            bool hidden = false;
            for (const ArtifactBox* b : covering)
                if (y >= b->y0 && y <= b->y1) {
                    hidden = true;
                    break;
                }
            if (!hidden) {
                sum += y;
                ++count;
            }
        }
        if (count > 0) {
            col_y[c] = sum / count;
            any = true;
        }
    }
    if (!any) throw std::runtime_error("extract_trace: no trace pixels in region");

    // Fill gaps by linear interpolation, edges by nearest value.
    int first = 0, last = ncols - 1;
    while (std::isnan(col_y[first])) ++first;
    while (std::isnan(col_y[last])) --last;
    for (int c = 0; c < first; ++c) col_y[c] = col_y[first];
    for (int c = last + 1; c < ncols; ++c) col_y[c] = col_y[last];
    int c = first;
    while (c <= last) {
        if (!std::isnan(col_y[c])) {
            ++c;
            continue;
        }
        int d = c;
        while (std::isnan(col_y[d])) ++d;
        const double a = col_y[c - 1], b = col_y[d];
        for (int k = c; k < d; ++k)
            col_y[k] = a + (b - a) * (k - (c - 1)) / static_cast<double>(d - (c - 1));
        c = d;
    }

    const double px_per_mv = to_pixels(spec, spec.mm_per_mv);
    // The stroke brush spans [-(w-1)/2, w/2], so even widths put the ink
    // centroid half a pixel past the vertex in both axes.
    const int bw = spec.trace_width_px;
    const double brush_bias = (bw / 2 - (bw - 1) / 2) / 2.0;
    const auto out_n = static_cast<std::size_t>(std::llround(fs * region.duration_s));
    std::vector<double> series(out_n);
    for (std::size_t k = 0; k < out_n; ++k) {
        const double t = static_cast<double>(k) / fs;
        const double x = region.x0 + brush_bias + to_pixels(spec, spec.mm_per_s * t);
        const double pos = std::clamp(x - cx0, 0.0, static_cast<double>(ncols - 1));
        const auto i0 = static_cast<std::size_t>(pos);
        const std::size_t i1 = std::min(i0 + 1, static_cast<std::size_t>(ncols - 1));
        const double f = pos - static_cast<double>(i0);
        const double y = col_y[i0] + f * (col_y[i1] - col_y[i0]) - brush_bias;
        series[k] = (region.baseline_px - y) / px_per_mv;
    }
    return series;
}

double snr_db(const std::vector<double>& ref, const std::vector<double>& est) {
    if (ref.size() != est.size() || ref.empty())
        throw std::runtime_error("snr_db: length mismatch or empty");
    double sig = 0.0, err = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        sig += ref[i] * ref[i];
        const double d = ref[i] - est[i];
        err += d * d;
    }
    if (sig == 0.0) throw std::runtime_error("snr_db: all-zero reference");
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(sig / err);
}

MseResult mse(const std::vector<double>& ref, const std::vector<double>& est) {
    if (ref.size() != est.size() || ref.empty())
        throw std::runtime_error("mse: length mismatch or empty");
    double acc = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double d = ref[i] - est[i];
        acc += d * d;
    }
    MseResult r;
    r.mse_mv2 = acc / static_cast<double>(ref.size());
    r.rmse_mv = std::sqrt(r.mse_mv2);
    return r;
}

EvalReport build_report(std::vector<LeadScore> scores, double bin_width_db) {
    if (scores.empty()) throw std::runtime_error("build_report: no scores");
    EvalReport rep;
    rep.scores = std::move(scores);
    rep.bin_width_db = bin_width_db;

    double mean = 0.0;
    for (const LeadScore& s : rep.scores) mean += s.snr_db;
    mean /= static_cast<double>(rep.scores.size());
    double var = 0.0;
    for (const LeadScore& s : rep.scores) var += (s.snr_db - mean) * (s.snr_db - mean);
    var /= static_cast<double>(rep.scores.size());
    rep.snr_mean_db = mean;
    rep.snr_std_db = std::sqrt(var);

    double lo = rep.scores.front().snr_db, hi = lo;
    for (const LeadScore& s : rep.scores) {
        lo = std::min(lo, s.snr_db);
        hi = std::max(hi, s.snr_db);
    }
    rep.histogram_min_db = std::floor(lo / bin_width_db) * bin_width_db;
    const auto nbins =
        static_cast<std::size_t>(std::floor((hi - rep.histogram_min_db) / bin_width_db)) + 1;
    rep.histogram.assign(nbins, 0);
    for (const LeadScore& s : rep.scores) {
        auto bin = static_cast<std::size_t>((s.snr_db - rep.histogram_min_db) / bin_width_db);
        bin = std::min(bin, nbins - 1);
        ++rep.histogram[bin];
    }
    return rep;
}

std::vector<double> polyline_to_series(const Polyline& pre_warp_polyline, double baseline_px,
                                       const PaperSpec& spec) {
    const double px_per_mv = to_pixels(spec, spec.mm_per_mv);
    std::vector<double> out;
    out.reserve(pre_warp_polyline.size());
    for (const PointF& p : pre_warp_polyline) out.push_back((baseline_px - p.y) / px_per_mv);
    return out;
}

std::vector<LeadScore> evaluate_image(const RasterImage& img, const GroundTruthMeta& meta) {
    // Undo the stored perspective so regions line up with the page frame.
    RasterImage flat = img;
    Matrix3 inv = Matrix3::identity();
    const bool warped = meta.matrix != Matrix3::identity();
    if (warped) {
        inv = meta.matrix.inverse();
        flat = warp_image(img, inv, meta.paper.bg_color);
    }
    const TraceMask mask = remove_grid(flat, meta.paper);

    // Vertical band per trace: halfway to the neighboring baselines.
    std::vector<double> baselines;
    for (const LeadTrace& t : meta.traces) baselines.push_back(t.baseline_px);
    std::sort(baselines.begin(), baselines.end());
    baselines.erase(std::unique(baselines.begin(), baselines.end()), baselines.end());
    auto band_for = [&](double baseline) {
        double above = 0.0, below = static_cast<double>(meta.paper.height_px);
        for (double b : baselines) {
            if (b < baseline) above = std::max(above, (b + baseline) / 2.0);
            if (b > baseline) below = std::min(below, (b + baseline) / 2.0);
        }
        return std::pair<double, double>(above, below);
    };

    // Occlusion boxes mapped back to the unwarped frame.
    std::vector<ArtifactBox> occlusions;
    for (const ArtifactBox& b : meta.artifacts) {
        if (!warped) {
            occlusions.push_back(b);
            continue;
        }
        const std::vector<PointF> corners = transform_points(
            {{static_cast<double>(b.x0), static_cast<double>(b.y0)},
             {static_cast<double>(b.x1), static_cast<double>(b.y0)},
             {static_cast<double>(b.x0), static_cast<double>(b.y1)},
             {static_cast<double>(b.x1), static_cast<double>(b.y1)}},
            inv);
        ArtifactBox ub = b;
        ub.x0 = static_cast<int>(std::floor(std::min({corners[0].x, corners[1].x, corners[2].x, corners[3].x})));
        ub.x1 = static_cast<int>(std::ceil(std::max({corners[0].x, corners[1].x, corners[2].x, corners[3].x})));
        ub.y0 = static_cast<int>(std::floor(std::min({corners[0].y, corners[1].y, corners[2].y, corners[3].y})));
        ub.y1 = static_cast<int>(std::ceil(std::max({corners[0].y, corners[1].y, corners[2].y, corners[3].y})));
        occlusions.push_back(ub);
    }

    const Matrix3 meta_inv = warped ? inv : Matrix3::identity();
    std::vector<LeadScore> scores;
    for (const LeadTrace& trace : meta.traces) {
        const Polyline pre_warp =
            warped ? transform_points(trace.polyline, meta_inv) : trace.polyline;
        const std::vector<double> ref = polyline_to_series(pre_warp, trace.baseline_px, meta.paper);
        if (ref.empty()) continue;
        const double fs = static_cast<double>(ref.size()) / trace.duration_s;

        TraceRegion region;
        region.x0 = trace.cell_x0;
        region.x1 = trace.cell_x1;
        region.baseline_px = trace.baseline_px;
        region.t_start_s = trace.t_start_s;
        region.duration_s = trace.duration_s;
        const auto [y0, y1] = band_for(trace.baseline_px);
        region.y0 = y0;
        region.y1 = y1;

        // Edge columns can pick up ink from the neighboring segment in the
        // same row; mask a small guard band and let interpolation fill it.
        std::vector<ArtifactBox> local_occlusions = occlusions;
        const int guard = meta.paper.trace_width_px + 2;
        ArtifactBox left_guard, right_guard;
        left_guard.x0 = static_cast<int>(std::floor(region.x0)) - 1;
        left_guard.x1 = static_cast<int>(std::floor(region.x0)) + guard;
        left_guard.y0 = static_cast<int>(region.y0);
        left_guard.y1 = static_cast<int>(region.y1);
        right_guard = left_guard;
        right_guard.x0 = static_cast<int>(std::ceil(region.x1)) - guard;
        right_guard.x1 = static_cast<int>(std::ceil(region.x1)) + 1;
        if (!trace.is_rhythm) {
            local_occlusions.push_back(left_guard);
            local_occlusions.push_back(right_guard);
        }

        LeadScore score;
        score.record_id = meta.record_id;
        score.lead_name = trace.lead_name + (trace.is_rhythm ? " (rhythm)" : "");
        std::vector<double> est = extract_trace(mask, region, meta.paper, fs, local_occlusions);
        est.resize(ref.size(), 0.0);
        score.snr_db = snr_db(ref, est);
        const MseResult m = mse(ref, est);
        score.mse_mv2 = m.mse_mv2;
        score.rmse_mv = m.rmse_mv;
        scores.push_back(std::move(score));
    }
    return scores;
}

std::string report_to_json(const EvalReport& report) {
    std::ostringstream out;
    out.precision(10);
    out << "{\n  \"snr_mean_db\": " << report.snr_mean_db
        << ",\n  \"snr_std_db\": " << report.snr_std_db << ",\n  \"leads\": [\n";
    for (std::size_t i = 0; i < report.scores.size(); ++i) {
        const LeadScore& s = report.scores[i];
        out << "    {\"record\": \"" << s.record_id << "\", \"lead\": \"" << s.lead_name
            << "\", \"snr_db\": " << s.snr_db << ", \"mse_mv2\": " << s.mse_mv2
            << ", \"rmse_mv\": " << s.rmse_mv << "}" << (i + 1 < report.scores.size() ? "," : "")
            << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

std::string histogram_to_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "bin_low,bin_high,count\n";
    for (std::size_t i = 0; i < report.histogram.size(); ++i) {
        const double lo = report.histogram_min_db + i * report.bin_width_db;
        out << lo << "," << lo + report.bin_width_db << "," << report.histogram[i] << "\n";
    }
    return out.str();
}

} // namespace ecggen
