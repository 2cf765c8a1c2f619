#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecggen/crease_wrinkle.hpp"
#include "ecggen/ecg_io.hpp"
#include "ecggen/geometry.hpp"
#include "ecggen/grid_renderer.hpp"
#include "ecggen/imaging_noise.hpp"
#include "ecggen/text_artifacts.hpp"

namespace ecggen {

struct HandwritingConfig {
    bool enabled = true;
    int style_min = 1, style_max = 7;
    int count_min = 1, count_max = 3;
    double size_px_min = 28.0, size_px_max = 64.0;
    std::string lexicon_path; // empty -> builtin lexicon
    std::string corpus_path;  // empty -> sample the lexicon directly
};

struct CreaseConfig {
    bool enabled = true;
    int n_min = 2, n_max = 5;
    double theta_min_deg = 20.0, theta_max_deg = 160.0;
    double intensity = 0.35;
    double sigma_px = 4.0;
    int line_width_px = 3;
};

struct WrinkleConfig {
    bool enabled = true;
    double alpha = 0.35;
    int block_px = 64;
    int overlap_px = 0; // 0 -> block/6
    int texture_w = 560, texture_h = 440; // synthesized then upscaled to page
    std::string seed_texture_path;        // empty -> bundled procedural seed
};

struct PerspectiveConfig {
    bool enabled = true;
    double corner_jitter_frac = 0.02; // of the page diagonal, per corner
};

struct TemplateConfig {
    PrintedTemplate printed;
    bool enabled = true;
    bool lead_names = true; // auto lead-name labels beside each segment
    double lead_name_font_mm = 3.2;
};

/// Full seeded recipe of every pipeline stage.
struct DistortionConfig {
    PaperSpec paper;
    std::optional<LeadLayout> layout; // absent -> default 12-lead layout
    TemplateConfig text;
    SignalNoiseSpec signal_noise;
    HandwritingConfig handwriting;
    CreaseConfig creases;
    WrinkleConfig wrinkles;
    PerspectiveConfig perspective;
    NoiseSpec imaging;
    bool with_pulse = true;
    std::uint64_t master_seed = 0;

    void validate() const;
};

DistortionConfig load_config(const std::string& path);
DistortionConfig config_from_json_text(const std::string& json_text);
std::string config_to_json_text(const DistortionConfig& cfg);

/// Per-image ground truth: polylines (post-perspective), the applied
/// matrix, artifact boxes, region geometry and stage timings.
struct GroundTruthMeta {
    std::string record_id;
    PaperSpec paper;
    Matrix3 matrix; // identity when perspective disabled
    std::vector<LeadTrace> traces; // polylines post-perspective; region fields pre-warp
    std::vector<ArtifactBox> artifacts;
    std::optional<CreaseSpec> crease_params;
    std::map<std::string, double> stage_seconds;
    double total_seconds = 0.0;
    std::vector<std::string> warnings;
};

std::string sidecar_to_json(const GroundTruthMeta& meta);
GroundTruthMeta sidecar_from_json(const std::string& json_text);

std::pair<RasterImage, GroundTruthMeta> generate_one(const EcgRecord& rec,
                                                     const DistortionConfig& cfg,
                                                     std::uint64_t record_index,
                                                     const std::string& record_id = {});

struct ManifestEntry {
    std::string record_id;
    std::string image_path;
    std::string sidecar_path;
    bool ok = false;
    std::string error;
    std::map<std::string, double> stage_seconds;
    double total_seconds = 0.0;
};

struct BatchManifest {
    std::vector<ManifestEntry> entries;
    std::size_t failures = 0;

    std::map<std::string, double> mean_stage_seconds() const;
    double mean_total_seconds() const;
};

BatchManifest generate_batch(const std::string& input_dir, const std::string& out_dir,
                             const DistortionConfig& cfg, int workers);

std::string manifest_to_json(const BatchManifest& manifest);
BatchManifest manifest_from_json(const std::string& json_text);

/// Per-stage average seconds plus total, one row per stage.
std::string report_timings(const BatchManifest& manifest);

} // namespace ecggen
