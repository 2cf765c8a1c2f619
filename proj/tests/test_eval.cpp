#include <doctest.h>

#include <cmath>

#include "ecggen/eval.hpp"
#include "ecggen/grid_renderer.hpp"
#include "ecggen/pipeline.hpp"

using namespace ecggen;

namespace {

EcgRecord single_lead(const std::string& name, double fs, double dur,
                      double (*f)(double)) {
    EcgRecord rec;
    rec.fs = fs;
    rec.duration_s = dur;
    Lead lead;
    lead.name = name;
    const auto n = static_cast<std::size_t>(std::llround(fs * dur));
    for (std::size_t i = 0; i < n; ++i) lead.samples.push_back(f(static_cast<double>(i) / fs));
    rec.leads.push_back(std::move(lead));
    return rec;
}

LeadLayout strip_layout(const PaperSpec& spec, const std::string& name) {
    LeadLayout layout;
    layout.rows = 1;
    layout.cols = 1;
    layout.order = {name};
    layout.rhythm_lead.reset();
    layout.row_baselines_mm = {spec.page_height_mm() / 2.0};
    return layout;
}

struct Rendered {
    RasterImage img;
    LeadTrace trace;
    PaperSpec spec;
};

Rendered render_single(double (*f)(double), bool with_pulse = true) {
    PaperSpec spec;
    const EcgRecord rec = single_lead("II", 500.0, 10.0, f);
    RasterImage img = render_blank_paper(spec);
    const auto traces = plot_record(img, rec, strip_layout(spec, "II"), spec, with_pulse);
    return {std::move(img), traces.front(), spec};
}

std::vector<double> digitize(const Rendered& r) {
    const TraceMask mask = remove_grid(r.img, r.spec);
    TraceRegion region;
    region.x0 = r.trace.cell_x0;
    region.x1 = r.trace.cell_x1;
    region.y0 = 0;
    region.y1 = r.spec.height_px - 1;
    region.baseline_px = r.trace.baseline_px;
    region.t_start_s = r.trace.t_start_s;
    region.duration_s = r.trace.duration_s;
    return extract_trace(mask, region, r.spec, 500.0);
}

} // namespace

TEST_CASE("snr closed forms") {
    // Oracle: 10*log10(2 / 0.01) = 23.0103 dB.
    CHECK(snr_db({1.0, 1.0}, {1.0, 0.9}) == doctest::Approx(23.010299956639813));
    CHECK(std::isinf(snr_db({1.0, 2.0}, {1.0, 2.0})));
    CHECK_THROWS(snr_db({0.0, 0.0}, {0.0, 0.1}));
    CHECK_THROWS(snr_db({1.0}, {1.0, 2.0}));
}

TEST_CASE("mse closed forms") {
    const MseResult r = mse({1.0, 2.0, 3.0}, {1.5, 2.0, 2.0});
    CHECK(r.mse_mv2 == doctest::Approx((0.25 + 0.0 + 1.0) / 3.0));
    CHECK(r.rmse_mv == doctest::Approx(std::sqrt(r.mse_mv2)));
}

TEST_CASE("grid removal classifies trace against grid and background") {
    PaperSpec spec;
    RasterImage img = render_blank_paper(spec);
    draw_line(img, 100, 100, 300, 100, spec.trace_color, 2);
    const TraceMask mask = remove_grid(img, spec);
    CHECK(mask.at(200, 100));
    CHECK_FALSE(mask.at(200, 300));
    const int gx = static_cast<int>(std::lround(to_pixels(spec, 5.0)));
    CHECK_FALSE(mask.at(gx, 300)); // coarse grid line is not trace
}

TEST_CASE("flat lead digitizes within the quantization bound") {
    const Rendered r = render_single(+[](double) { return 0.5; });
    const auto est = digitize(r);
    const double quantum = 1.0 / to_pixels(r.spec, r.spec.mm_per_mv); // 1 px in mV
    for (double v : est) CHECK(std::abs(v - 0.5) <= quantum);
}

TEST_CASE("sinusoid digitizes with high fidelity") {
    const Rendered r = render_single(
        +[](double t) { return 0.9 * std::sin(2.0 * 3.141592653589793 * 2.0 * t); });
    const auto est = digitize(r);
    const auto ref = polyline_to_series(r.trace.polyline, r.trace.baseline_px, r.spec);
    REQUIRE(est.size() == ref.size());
    CHECK(snr_db(ref, est) > 30.0);
    // Correlation against the analytic signal.
    double se = 0, ss = 0, cross = 0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double s = 0.9 * std::sin(2.0 * 3.141592653589793 * 2.0 * (static_cast<double>(i) / 500.0));
        se += est[i] * est[i];
        ss += s * s;
        cross += est[i] * s;
    }
    CHECK(cross / std::sqrt(se * ss) > 0.99);
}

TEST_CASE("polyline reconstruction is exact for rendered vertices") {
    const Rendered r = render_single(
        +[](double t) { return 0.4 * std::sin(2.0 * 3.141592653589793 * 1.0 * t); });
    const auto ref = polyline_to_series(r.trace.polyline, r.trace.baseline_px, r.spec);
    REQUIRE(ref.size() == 5000);
    for (std::size_t i = 0; i < ref.size(); i += 501) {
        const double expected =
            0.4 * std::sin(2.0 * 3.141592653589793 * (static_cast<double>(i) / 500.0));
        CHECK(ref[i] == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("occluded columns are bridged by interpolation") {
    const Rendered clean = render_single(+[](double t) { return std::sin(t); });
    Rendered covered = clean;
    // Paint a fake annotation across the trace and declare it occluded.
    const int bx0 = 900, bx1 = 1000;
    const int by0 = static_cast<int>(covered.trace.baseline_px) - 120;
    const int by1 = static_cast<int>(covered.trace.baseline_px) + 120;
    fill_rect(covered.img, bx0, by0, bx1, by1, {20, 20, 40});
    const TraceMask mask = remove_grid(covered.img, covered.spec);
    TraceRegion region;
    region.x0 = covered.trace.cell_x0;
    region.x1 = covered.trace.cell_x1;
    region.y0 = 0;
    region.y1 = covered.spec.height_px - 1;
    region.baseline_px = covered.trace.baseline_px;
    region.duration_s = covered.trace.duration_s;
    ArtifactBox box;
    box.x0 = bx0;
    box.y0 = by0;
    box.x1 = bx1;
    box.y1 = by1;
    const auto est = extract_trace(mask, region, covered.spec, 500.0, {box});
    const auto ref = digitize(clean);
    double worst = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) worst = std::max(worst, std::abs(est[i] - ref[i]));
    CHECK(worst < 0.05); // slow signal, linear bridge stays close
}

TEST_CASE("report statistics and histogram") {
    std::vector<LeadScore> scores;
    for (double v : {20.0, 22.0, 22.4, 25.0}) {
        LeadScore s;
        s.record_id = "r";
        s.lead_name = "II";
        s.snr_db = v;
        scores.push_back(s);
    }
    const EvalReport rep = build_report(scores);
    CHECK(rep.snr_mean_db == doctest::Approx(22.35));
    const double expected_std = std::sqrt((2.35 * 2.35 + 0.35 * 0.35 + 0.05 * 0.05 + 2.65 * 2.65) / 4.0);
    CHECK(rep.snr_std_db == doctest::Approx(expected_std));
    CHECK(rep.histogram_min_db == doctest::Approx(20.0));
    REQUIRE(rep.histogram.size() == 6);
    CHECK(rep.histogram[0] == 1); // [20,21)
    CHECK(rep.histogram[2] == 2); // [22,23)
    CHECK(rep.histogram[5] == 1); // [25,26)

    const std::string csv = histogram_to_csv(rep);
    CHECK(csv.find("bin_low,bin_high,count") == 0);
    CHECK(csv.find("22,23,2") != std::string::npos);
    const std::string json = report_to_json(rep);
    CHECK(json.find("snr_mean_db") != std::string::npos);
}

TEST_CASE("full-image evaluation recovers every lead") {
    DistortionConfig cfg;
    cfg.handwriting.enabled = false;
    cfg.creases.enabled = false;
    cfg.wrinkles.enabled = false;
    cfg.perspective.enabled = false;
    EcgRecord rec;
    rec.fs = 500.0;
    rec.duration_s = 10.0;
    const char* names[] = {"I",  "II",  "III", "aVR", "aVL", "aVF",
                           "V1", "V2",  "V3",  "V4",  "V5",  "V6"};
    int li = 0;
    for (const char* name : names) {
        Lead lead;
        lead.name = name;
        for (int i = 0; i < 5000; ++i)
            lead.samples.push_back(0.7 * std::sin(2.0 * 3.141592653589793 *
                                                  (1.0 + 0.2 * li) * i / 500.0));
        rec.leads.push_back(std::move(lead));
        ++li;
    }
    const auto [img, meta] = generate_one(rec, cfg, 0, "t");
    const auto scores = evaluate_image(img, meta);
    REQUIRE(scores.size() == 13);
    for (const LeadScore& s : scores) CHECK(s.snr_db > 20.0);
}
