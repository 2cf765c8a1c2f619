#include <doctest.h>

#include <cmath>

#include "ecggen/grid_renderer.hpp"

using namespace ecggen;

namespace {

EcgRecord twelve_lead_record(double fs, double dur, double amp_mv) {
    EcgRecord rec;
    rec.fs = fs;
    rec.duration_s = dur;
    const char* names[] = {"I",  "II",  "III", "aVR", "aVL", "aVF",
                           "V1", "V2",  "V3",  "V4",  "V5",  "V6"};
    const auto n = static_cast<std::size_t>(std::llround(fs * dur));
    for (const char* name : names) {
        Lead lead;
        lead.name = name;
        for (std::size_t i = 0; i < n; ++i)
            lead.samples.push_back(amp_mv * std::sin(2.0 * 3.141592653589793 * 1.3 *
                                                     static_cast<double>(i) / fs));
        rec.leads.push_back(std::move(lead));
    }
    return rec;
}

} // namespace

TEST_CASE("pixel conversion at 200 dpi") {
    PaperSpec spec;
    CHECK(spec.px_per_mm() == doctest::Approx(200.0 / 25.4));
    // Oracle: 1 inch of paper = 25.4 mm = exactly dpi pixels.
    CHECK(to_pixels(spec, 25.4) == doctest::Approx(200.0));
    CHECK(to_pixels(spec, 5.0) == doctest::Approx(39.37007874).epsilon(1e-9));
    CHECK(spec.page_width_mm() == doctest::Approx(279.4));
}

TEST_CASE("paper spec validation") {
    PaperSpec spec;
    CHECK_NOTHROW(spec.validate());
    spec.width_px = 30; // smaller than one coarse cell
    CHECK_THROWS(spec.validate());
}

TEST_CASE("blank paper holds only the three grid colors") {
    PaperSpec spec;
    spec.width_px = 440;
    spec.height_px = 340;
    const RasterImage img = render_blank_paper(spec);
    int bg = 0, fine = 0, coarse = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const Rgb c = img.get(x, y);
            if (c == spec.bg_color) ++bg;
            else if (c == spec.fine_color) ++fine;
            else if (c == spec.coarse_color) ++coarse;
            else FAIL("unexpected color at ", x, ",", y);
        }
    CHECK(bg > fine);
    CHECK(fine > 0);
    CHECK(coarse > 0);
}

TEST_CASE("coarse lines land every 5 mm") {
    PaperSpec spec;
    const RasterImage img = render_blank_paper(spec);
    const double pitch = to_pixels(spec, spec.coarse_grid_mm); // 39.37 px
    int vertical = 0;
    for (int k = 0;; ++k) {
        const int x = static_cast<int>(std::lround(k * pitch));
        if (x >= spec.width_px) break;
        CHECK(img.get(x, 100) == spec.coarse_color);
        ++vertical;
    }
    // Oracle: floor(2199 / 39.37) + 1 = 56 coarse verticals on 2200 px.
    CHECK(vertical == 56);
}

TEST_CASE("flat lead renders on its baseline") {
    PaperSpec spec;
    EcgRecord rec = twelve_lead_record(500, 10.0, 0.0);
    RasterImage img = render_blank_paper(spec);
    const auto traces = plot_record(img, rec, default_12lead_layout(spec), spec, false);
    REQUIRE(traces.size() == 13);
    for (const LeadTrace& t : traces) {
        CHECK_FALSE(t.clipped);
        for (const PointF& p : t.polyline) CHECK(p.y == doctest::Approx(t.baseline_px));
        const int y = static_cast<int>(std::lround(t.baseline_px));
        const int x = static_cast<int>(std::lround((t.cell_x0 + t.cell_x1) / 2.0));
        CHECK(img.get(x, y) == spec.trace_color);
    }
}

TEST_CASE("default layout covers all 12 leads plus the rhythm strip") {
    PaperSpec spec;
    const LeadLayout layout = default_12lead_layout(spec);
    CHECK(layout.rows == 3);
    CHECK(layout.cols == 4);
    CHECK(layout.order.size() == 12);
    CHECK(layout.order[0] == "I");
    CHECK(layout.order[1] == "aVR");
    CHECK(*layout.rhythm_lead == "II");
    CHECK(layout.row_baselines_mm.size() == 4);
    CHECK_NOTHROW(layout.validate(spec));
}

TEST_CASE("grid columns split the record into consecutive time windows") {
    PaperSpec spec;
    EcgRecord rec = twelve_lead_record(500, 10.0, 0.5);
    RasterImage img = render_blank_paper(spec);
    const auto traces = plot_record(img, rec, default_12lead_layout(spec), spec, true);
    const LeadTrace* v1 = nullptr;
    const LeadTrace* rhythm = nullptr;
    for (const LeadTrace& t : traces) {
        if (t.lead_name == "V1" && !t.is_rhythm) v1 = &t;
        if (t.is_rhythm) rhythm = &t;
    }
    REQUIRE(v1 != nullptr);
    REQUIRE(rhythm != nullptr);
    CHECK(v1->t_start_s == doctest::Approx(5.0)); // third column
    CHECK(v1->duration_s == doctest::Approx(2.5));
    CHECK(rhythm->t_start_s == doctest::Approx(0.0));
    CHECK(rhythm->duration_s == doctest::Approx(10.0));
    CHECK(rhythm->polyline.size() == 5000);
    CHECK(v1->polyline.size() == 1250);
}

TEST_CASE("calibration pulse measures 1 mV by 0.2 s at 200 dpi") {
    PaperSpec spec;
    EcgRecord rec = twelve_lead_record(500, 10.0, 0.0);
    RasterImage img = render_blank_paper(spec);
    const auto traces = plot_record(img, rec, default_12lead_layout(spec), spec, true);
    const LeadTrace& t = traces.front();

    // Scan the strip left of the first cell for pulse ink.
    const int y_base = static_cast<int>(std::lround(t.baseline_px));
    int min_x = img.width, max_x = -1, min_y = img.height;
    for (int x = 0; x < static_cast<int>(t.cell_x0); ++x)
        for (int y = y_base - 120; y <= y_base + 4; ++y)
            if (img.get(x, y) == spec.trace_color) {
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
            }
    REQUIRE(max_x >= 0);
    const double width_px = max_x - min_x + 1 - spec.trace_width_px; // rise and fall stroke width
    const double height_px = y_base - min_y;
    CHECK(std::abs(height_px - 78.74) <= 1.0);
    CHECK(std::abs(width_px - 39.37) <= 1.0);
}

TEST_CASE("clipping is reported for an oversized signal") {
    PaperSpec spec;
    EcgRecord rec = twelve_lead_record(500, 10.0, 30.0); // 300 mm swing
    RasterImage img = render_blank_paper(spec);
    const auto traces = plot_record(img, rec, default_12lead_layout(spec), spec, false);
    bool any_clipped = false;
    for (const LeadTrace& t : traces) any_clipped |= t.clipped;
    CHECK(any_clipped);
}

TEST_CASE("layout referencing a missing lead is rejected") {
    PaperSpec spec;
    EcgRecord rec = twelve_lead_record(500, 10.0, 0.5);
    rec.leads.pop_back(); // drop V6
    RasterImage img = render_blank_paper(spec);
    CHECK_THROWS(plot_record(img, rec, default_12lead_layout(spec), spec, false));
}
