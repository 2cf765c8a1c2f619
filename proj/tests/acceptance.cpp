// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "ecggen/crease_wrinkle.hpp"
#include "ecggen/eval.hpp"
#include "ecggen/geometry.hpp"
#include "ecggen/grid_renderer.hpp"
#include "ecggen/image_io.hpp"
#include "ecggen/pipeline.hpp"
#include "ecggen/rng.hpp"

using namespace ecggen;
namespace fs = std::filesystem;

namespace {

double brute_force_cut_cost(const std::vector<std::vector<double>>& e) {
    const int rows = static_cast<int>(e.size());
    const int cols = static_cast<int>(e[0].size());
    double best = 1e300;
    std::vector<int> path(rows);
    auto recurse = [&](auto&& self, int row, double cost) -> void {
        if (cost >= best) return;
        if (row == rows) {
            best = cost;
            return;
        }
        const int lo = row == 0 ? 0 : std::max(0, path[row - 1] - 1);
        const int hi = row == 0 ? cols - 1 : std::min(cols - 1, path[row - 1] + 1);
        for (int c = lo; c <= hi; ++c) {
            path[row] = c;
            self(self, row + 1, cost + e[row][c]);
        }
    };
    recurse(recurse, 0, 0.0);
    return best;
}

EcgRecord random_sinusoid_record(Rng& rng) {
    EcgRecord rec;
    rec.fs = 500.0;
    rec.duration_s = 10.0;
    const char* names[] = {"I",  "II",  "III", "aVR", "aVL", "aVF",
                           "V1", "V2",  "V3",  "V4",  "V5",  "V6"};
    for (const char* name : names) {
        // Sum of sinusoids <= 40 Hz, peak well under 2 mV, amplitudes
        // shrinking with frequency the way ECG spectra roughly do.
        const double a1 = rng.next_uniform(0.4, 0.9), f1 = rng.next_uniform(0.7, 1.5);
        const double a2 = rng.next_uniform(0.1, 0.3), f2 = rng.next_uniform(3.0, 8.0);
        const double a3 = rng.next_uniform(0.02, 0.08), f3 = rng.next_uniform(15.0, 40.0);
        const double p1 = rng.next_uniform(0.0, 6.283), p2 = rng.next_uniform(0.0, 6.283);
        const double p3 = rng.next_uniform(0.0, 6.283);
        Lead lead;
        lead.name = name;
        for (int i = 0; i < 5000; ++i) {
            const double t = i / 500.0;
            lead.samples.push_back(a1 * std::sin(2 * M_PI * f1 * t + p1) +
                                   a2 * std::sin(2 * M_PI * f2 * t + p2) +
                                   a3 * std::sin(2 * M_PI * f3 * t + p3));
        }
        rec.leads.push_back(std::move(lead));
    }
    return rec;
}

EcgRecord plain_12lead() {
    Rng rng(999);
    return random_sinusoid_record(rng);
}

std::string write_batch_inputs(int count, std::uint64_t seed) {
    const fs::path dir = fs::temp_directory_path() / ("ecggen_acc_in_" + std::to_string(seed));
    fs::remove_all(dir);
    fs::create_directories(dir);
    Rng rng(seed);
    for (int r = 0; r < count; ++r) {
        const EcgRecord rec = random_sinusoid_record(rng);
        std::ofstream out(dir / ("rec" + std::to_string(r) + ".csv"));
        for (std::size_t l = 0; l < rec.leads.size(); ++l) out << (l ? "," : "") << rec.leads[l].name;
        out << "\n";
        for (std::size_t i = 0; i < rec.sample_count(); ++i) {
            for (std::size_t l = 0; l < rec.leads.size(); ++l)
                out << (l ? "," : "") << rec.leads[l].samples[i];
            out << "\n";
        }
    }
    return dir.string();
}

std::vector<std::uint64_t> batch_digests(const std::string& in_dir, int workers,
                                         const DistortionConfig& cfg, const std::string& tag) {
    const fs::path out = fs::temp_directory_path() / ("ecggen_acc_out_" + tag);
    fs::remove_all(out);
    const BatchManifest manifest = generate_batch(in_dir, out.string(), cfg, workers);
    std::vector<std::uint64_t> digests;
    for (const ManifestEntry& e : manifest.entries) {
        if (!e.ok) throw std::runtime_error("generation failed: " + e.error);
        digests.push_back(image_digest(read_image(e.image_path)));
    }
    return digests;
}

bool dp_cut_oracle_equivalence(std::string& detail) {
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const int rows = static_cast<int>(rng.next_int(2, 8));
        const int cols = static_cast<int>(rng.next_int(2, 6));
        std::vector<std::vector<double>> ov1(rows, std::vector<double>(cols));
        std::vector<std::vector<double>> ov2(rows, std::vector<double>(cols));
        std::vector<std::vector<double>> e(rows, std::vector<double>(cols));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                ov1[i][j] = rng.next_uniform(0.0, 255.0);
                ov2[i][j] = rng.next_uniform(0.0, 255.0);
                const double d = ov1[i][j] - ov2[i][j];
                e[i][j] = d * d;
            }
        const std::vector<int> cut = min_error_boundary_cut(ov1, ov2);
        double cut_cost = 0.0;
        for (int i = 0; i < rows; ++i) cut_cost += e[i][cut[i]];
        const double oracle = brute_force_cut_cost(e);
        if (std::abs(cut_cost - oracle) > 1e-9 * std::max(1.0, oracle)) {
            detail = "trial " + std::to_string(trial) + ": dp cost " + std::to_string(cut_cost) +
                     " vs oracle " + std::to_string(oracle);
            return false;
        }
    }
    detail = "200/200 random block pairs match the exhaustive minimum";
    return true;
}

bool crease_line_reproduction(std::string& detail) {
    const CreaseLines lines = generate_crease_lines(3, 135.0, 2200, 1700);
    const std::vector<PointF> expected{{975, 0}, {1950, 0}, {2200, 725}};
    for (int i = 0; i < 3; ++i)
        if (lines.starts[i] != expected[i]) {
            detail = "start " + std::to_string(i) + " = (" + std::to_string(lines.starts[i].x) +
                     "," + std::to_string(lines.starts[i].y) + ")";
            return false;
        }
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = static_cast<int>(rng.next_int(1, 9));
        const double theta = rng.next_uniform(1.0, 179.0);
        const CreaseLines random_lines = generate_crease_lines(n, theta, 2200, 1700);
        for (int i = 0; i < n; ++i) {
            const PointF& p = random_lines.ends[i];
            const PointF& s = random_lines.starts[i];
            const bool in = p.x >= -1e-9 && p.x <= 2200 + 1e-9 && p.y >= -1e-9 && p.y <= 1700 + 1e-9;
            const bool start_in =
                s.x >= -1e-9 && s.x <= 2200 + 1e-9 && s.y >= -1e-9 && s.y <= 1700 + 1e-9;
            if (!in || !start_in) {
                detail = "segment escapes page at n=" + std::to_string(n) +
                         " theta=" + std::to_string(theta);
                return false;
            }
        }
    }
    detail = "hand-traced starts match; 100 random clipped segments stay on page";
    return true;
}

bool pulse_scale_fidelity(std::string& detail) {
    PaperSpec spec;
    EcgRecord rec = plain_12lead();
    for (Lead& lead : rec.leads)
        for (double& v : lead.samples) v = 0.0;
    RasterImage img = render_blank_paper(spec);
    const auto traces = plot_record(img, rec, default_12lead_layout(spec), spec, true);
    const LeadTrace& t = traces.front();
    const int y_base = static_cast<int>(std::lround(t.baseline_px));
    int min_x = img.width, max_x = -1, min_y = img.height;
    for (int x = 0; x < static_cast<int>(t.cell_x0); ++x)
        for (int y = y_base - 120; y <= y_base + 4; ++y)
            if (img.get(x, y) == spec.trace_color) {
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
            }
    if (max_x < 0) {
        detail = "no pulse ink found";
        return false;
    }
    const double width = max_x - min_x + 1 - spec.trace_width_px;
    const double height = y_base - min_y;
    detail = "pulse " + std::to_string(height) + " px tall x " + std::to_string(width) +
             " px wide (want 78.74 x 39.37 +-1)";
    return std::abs(height - 78.74) <= 1.0 && std::abs(width - 39.37) <= 1.0;
}

bool round_trip_snr(std::string& detail) {
    DistortionConfig cfg;
    cfg.text.enabled = false;
    cfg.handwriting.enabled = false;
    cfg.creases.enabled = false;
    cfg.wrinkles.enabled = false;
    cfg.perspective.enabled = false;
    Rng rng(4242);
    double worst = 1e9, sum = 0.0;
    std::size_t count = 0;
    for (int r = 0; r < 50; ++r) {
        const EcgRecord rec = random_sinusoid_record(rng);
        const auto [img, meta] = generate_one(rec, cfg, static_cast<std::uint64_t>(r), "acc");
        for (const LeadScore& s : evaluate_image(img, meta)) {
            worst = std::min(worst, s.snr_db);
            sum += s.snr_db;
            ++count;
        }
    }
    const double mean = sum / static_cast<double>(count);
    detail = "min " + std::to_string(worst) + " dB, mean " + std::to_string(mean) + " dB over " +
             std::to_string(count) + " leads (want min >= 20, mean >= 25)";
    return worst >= 20.0 && mean >= 25.0;
}

bool noise_statistics(std::string& detail) {
    const int w = 360, h = 300;
    const double n = static_cast<double>(w) * h;
    const RasterImage gray(w, h, {128, 128, 128});

    const RasterImage gauss = add_gaussian_noise(gray, 10.0, 1);
    double dsum = 0.0, dsq = 0.0;
    for (std::size_t i = 0; i < gauss.pixels.size(); ++i) {
        const double d = static_cast<double>(gauss.pixels[i]) - 128.0;
        dsum += d;
        dsq += d * d;
    }
    const double mean_d = dsum / (n * 3.0);
    const double stddev = std::sqrt(dsq / (n * 3.0) - mean_d * mean_d);

    const RasterImage sp = add_salt_pepper(gray, 0.1, 2);
    int changed = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (sp.get(x, y) != Rgb{128, 128, 128}) ++changed;
    const double sp_sigma = std::sqrt(n * 0.1 * 0.9);
    const bool sp_ok = std::abs(changed - n * 0.1) <= 3.0 * sp_sigma;

    const RasterImage pois = add_poisson_noise(RasterImage(w, h, {100, 100, 100}), 5.0, false, 3);
    double psum = 0.0;
    for (std::uint8_t v : pois.pixels) psum += v;
    const double shift = psum / (n * 3.0) - 100.0;

    detail = "gaussian std " + std::to_string(stddev) + " (want [9.5,10.5]); salt-pepper changed " +
             std::to_string(changed) + "/" + std::to_string(static_cast<int>(n * 0.1)) +
             " expected; poisson mean shift " + std::to_string(shift) + " (want 5 +- 0.2)";
    return stddev >= 9.5 && stddev <= 10.5 && sp_ok && std::abs(shift - 5.0) <= 0.2;
}

bool warp_coherence(std::string& detail) {
    PaperSpec spec;
    const EcgRecord rec = plain_12lead();
    RasterImage img = render_blank_paper(spec);
    const auto traces = plot_record(img, rec, default_12lead_layout(spec), spec, true);
    const double tol = std::ceil(spec.trace_width_px / 2.0) + 1.0;
    const int r = static_cast<int>(tol);
    Rng rng(31337);
    for (int trial = 0; trial < 20; ++trial) {
        const double jitter = 0.03 * std::hypot(spec.width_px, spec.height_px);
        const std::array<PointF, 4> src{{{0, 0},
                                         {static_cast<double>(spec.width_px), 0},
                                         {static_cast<double>(spec.width_px),
                                          static_cast<double>(spec.height_px)},
                                         {0, static_cast<double>(spec.height_px)}}};
        std::array<PointF, 4> dst;
        for (int i = 0; i < 4; ++i)
            dst[i] = {src[i].x + rng.next_uniform(-jitter, jitter),
                      src[i].y + rng.next_uniform(-jitter, jitter)};
        const Matrix3 M = projective_from_corners(src, dst);
        const RasterImage warped = warp_image(img, M, {0, 255, 0});
        for (const LeadTrace& t : traces) {
            for (std::size_t vi = 0; vi < t.polyline.size(); vi += 7) {
                const PointF p = transform_point(t.polyline[vi], M);
                const int px = static_cast<int>(std::lround(p.x));
                const int py = static_cast<int>(std::lround(p.y));
                bool found = false;
                for (int dy = -r; dy <= r && !found; ++dy)
                    for (int dx = -r; dx <= r && !found; ++dx) {
                        if (!warped.in_bounds(px + dx, py + dy)) continue;
                        const Rgb c = warped.get(px + dx, py + dy);
                        if (c.r + c.g + c.b < 270) found = true; // dark trace ink
                    }
                if (!found && warped.in_bounds(px, py)) {
                    detail = "trial " + std::to_string(trial) + ": vertex (" +
                             std::to_string(px) + "," + std::to_string(py) +
                             ") has no trace ink within " + std::to_string(r) + " px";
                    return false;
                }
            }
        }
    }
    detail = "all sampled vertices within " + std::to_string(r) + " px of ink over 20 transforms";
    return true;
}

bool determinism_across_workers(std::string& detail) {
    const std::string in_dir = write_batch_inputs(10, 555);
    DistortionConfig cfg;
    cfg.master_seed = 99;
    cfg.imaging.gaussian_eta = 5.0;
    cfg.imaging.sp_p = 0.01;
    for (int round = 0; round < 2; ++round) {
        const auto d1 = batch_digests(in_dir, 1, cfg, "w1_" + std::to_string(round));
        const auto d8 = batch_digests(in_dir, 8, cfg, "w8_" + std::to_string(round));
        if (d1 != d8) {
            detail = "digest mismatch between 1 and 8 workers in round " + std::to_string(round);
            return false;
        }
    }
    detail = "10-record digests identical for 1 vs 8 workers, both rounds";
    return true;
}

bool throughput_sanity(std::string& detail, BatchManifest& manifest_out) {
    const std::string in_dir = write_batch_inputs(5, 808);
    const fs::path out = fs::temp_directory_path() / "ecggen_acc_timing";
    fs::remove_all(out);
    DistortionConfig cfg;
    cfg.master_seed = 3;
    cfg.imaging.gaussian_eta = 5.0;
    cfg.imaging.poisson_lambda = 3.0;
    cfg.imaging.sp_p = 0.01;
    cfg.imaging.kelvin = 12000.0;
    manifest_out = generate_batch(in_dir, out.string(), cfg, 1);
    for (const ManifestEntry& e : manifest_out.entries)
        if (!e.ok) {
            detail = "generation failed: " + e.error;
            return false;
        }
    const double mean_s = manifest_out.mean_total_seconds();
    detail = "mean " + std::to_string(mean_s) + " s/image at 2200x1700 (want < 30)";
    return mean_s < 30.0;
}

bool kernel_normalization(std::string& detail) {
    Rng rng(2718);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double sigma = rng.next_uniform(0.3, 12.0);
        const int radius = static_cast<int>(rng.next_int(1, 20));
        const auto k = gaussian_kernel(sigma, radius);
        double sum = 0.0;
        for (const auto& row : k)
            for (double v : row) sum += v;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    detail = "max |sum - 1| = " + std::to_string(worst) + " over 100 kernels (want <= 1e-12)";
    return worst <= 1e-12;
}

} // namespace

int main() {
    int failures = 0;
    BatchManifest timing_manifest;
    const std::vector<std::pair<std::string, std::function<bool(std::string&)>>> criteria{
        {"dp cut equals exhaustive oracle", dp_cut_oracle_equivalence},
        {"crease line generation", crease_line_reproduction},
        {"calibration pulse scale", pulse_scale_fidelity},
        {"round-trip snr", round_trip_snr},
        {"imaging noise statistics", noise_statistics},
        {"warp coherence", warp_coherence},
        {"worker-count determinism", determinism_across_workers},
        {"throughput",
         [&timing_manifest](std::string& d) { return throughput_sanity(d, timing_manifest); }},
        {"gaussian kernel normalization", kernel_normalization},
    };
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = fn(detail);
        } catch (const std::exception& ex) {
            detail = std::string("exception: ") + ex.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s: %s (%.1fs) - %s\n", ok ? "PASS" : "FAIL", name.c_str(), secs,
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (!timing_manifest.entries.empty()) {
        std::printf("\nPer-stage timing breakdown:\n%s", report_timings(timing_manifest).c_str());
    }
    return failures;
}
