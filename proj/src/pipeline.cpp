#include "ecggen/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "ecggen/image_io.hpp"
#include "ecggen/rng.hpp"

namespace ecggen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Stage tags for seed derivation; disabling one stage never shifts the
// seeds consumed by the others.
enum StageId : std::uint64_t {
    kStageSignalNoise = 0,
    kStageRender = 1,
    kStagePrinted = 2,
    kStageHandwriting = 3,
    kStageCrease = 4,
    kStageWrinkle = 5,
    kStagePerspective = 6,
    kStageImaging = 7,
};

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw std::runtime_error("config: " + where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known) throw std::runtime_error("config: unknown key '" + where + key + "'");
    }
}

Rgb rgb_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3)
        throw std::runtime_error("config: " + where + " must be an [r, g, b] array");
    return {j[0].get<std::uint8_t>(), j[1].get<std::uint8_t>(), j[2].get<std::uint8_t>()};
}

json rgb_to_json(Rgb c) {
    return json::array({c.r, c.g, c.b});
}

template <typename T>
void opt(const json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

double stage_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

void DistortionConfig::validate() const {
    paper.validate();
    if (layout) layout->validate(paper);
    text.printed.validate(paper);
    signal_noise.validate();
    imaging.validate();
    if (handwriting.style_min < 1 || handwriting.style_max > 7 ||
        handwriting.style_min > handwriting.style_max)
        throw std::runtime_error("config: handwriting style range must be within [1, 7]");
    if (handwriting.count_min < 0 || handwriting.count_min > handwriting.count_max)
        throw std::runtime_error("config: handwriting count range invalid");
    if (handwriting.size_px_min < 8.0 || handwriting.size_px_min > handwriting.size_px_max)
        throw std::runtime_error("config: handwriting size range invalid (min 8 px)");
    if (creases.n_min < 0 || creases.n_min > creases.n_max)
        throw std::runtime_error("config: creases.n range invalid");
    if (!(creases.theta_min_deg > 0.0 && creases.theta_max_deg < 180.0 &&
          creases.theta_min_deg <= creases.theta_max_deg))
        throw std::runtime_error("config: creases.theta range must be within (0, 180)");
    if (!(creases.intensity >= 0.0 && creases.intensity <= 1.0))
        throw std::runtime_error("config: creases.intensity must be in [0, 1]");
    if (!(wrinkles.alpha >= 0.0 && wrinkles.alpha <= 1.0))
        throw std::runtime_error("config: wrinkles.alpha must be in [0, 1]");
    if (wrinkles.block_px < 8) throw std::runtime_error("config: wrinkles.block_px must be >= 8");
    if (wrinkles.texture_w < wrinkles.block_px || wrinkles.texture_h < wrinkles.block_px)
        throw std::runtime_error("config: wrinkles texture dims must be >= block_px");
    if (!(perspective.corner_jitter_frac >= 0.0 && perspective.corner_jitter_frac <= 0.1))
        throw std::runtime_error("config: perspective.corner_jitter_frac must be in [0, 0.1]");
}

DistortionConfig config_from_json_text(const std::string& json_text) {
    std::string trimmed = json_text;
    const auto a = trimmed.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) trimmed = "{}";
    json j = json::parse(trimmed);

    DistortionConfig cfg;
    check_keys(j, "", {"paper", "layout", "text", "signal_noise", "handwriting", "creases",
                       "wrinkles", "perspective", "imaging", "with_pulse", "master_seed"});

    if (j.contains("paper")) {
        const json& p = j["paper"];
        check_keys(p, "paper.", {"dpi", "width_px", "height_px", "mm_per_s", "mm_per_mv",
                                 "fine_grid_mm", "coarse_grid_mm", "bg_color", "fine_color",
                                 "coarse_color", "trace_color", "trace_width_px", "antialias"});
        opt(p, "dpi", cfg.paper.dpi);
        opt(p, "width_px", cfg.paper.width_px);
        opt(p, "height_px", cfg.paper.height_px);
        opt(p, "mm_per_s", cfg.paper.mm_per_s);
        opt(p, "mm_per_mv", cfg.paper.mm_per_mv);
        opt(p, "fine_grid_mm", cfg.paper.fine_grid_mm);
        opt(p, "coarse_grid_mm", cfg.paper.coarse_grid_mm);
        opt(p, "trace_width_px", cfg.paper.trace_width_px);
        opt(p, "antialias", cfg.paper.antialias);
        if (p.contains("bg_color")) cfg.paper.bg_color = rgb_from_json(p["bg_color"], "paper.bg_color");
        if (p.contains("fine_color"))
            cfg.paper.fine_color = rgb_from_json(p["fine_color"], "paper.fine_color");
        if (p.contains("coarse_color"))
            cfg.paper.coarse_color = rgb_from_json(p["coarse_color"], "paper.coarse_color");
        if (p.contains("trace_color"))
            cfg.paper.trace_color = rgb_from_json(p["trace_color"], "paper.trace_color");
    }

    if (j.contains("layout")) {
        const json& l = j["layout"];
        check_keys(l, "layout.",
                   {"rows", "cols", "order", "rhythm_lead", "row_baselines_mm", "margin_left_mm",
                    "margin_right_mm", "margin_top_mm", "margin_bottom_mm"});
        LeadLayout layout = default_12lead_layout(cfg.paper);
        opt(l, "rows", layout.rows);
        opt(l, "cols", layout.cols);
        if (l.contains("order")) layout.order = l["order"].get<std::vector<std::string>>();
        if (l.contains("rhythm_lead")) {
            if (l["rhythm_lead"].is_null())
                layout.rhythm_lead.reset();
            else
                layout.rhythm_lead = l["rhythm_lead"].get<std::string>();
        }
        opt(l, "margin_left_mm", layout.margin_left_mm);
        opt(l, "margin_right_mm", layout.margin_right_mm);
        opt(l, "margin_top_mm", layout.margin_top_mm);
        opt(l, "margin_bottom_mm", layout.margin_bottom_mm);
        if (l.contains("row_baselines_mm"))
            layout.row_baselines_mm = l["row_baselines_mm"].get<std::vector<double>>();
        else if (l.contains("rows") || l.contains("rhythm_lead")) {
            // Re-derive evenly spaced baselines for a non-default row count.
            layout.row_baselines_mm.clear();
            const double usable =
                cfg.paper.page_height_mm() - layout.margin_top_mm - layout.margin_bottom_mm;
            const int bands = layout.rows + (layout.rhythm_lead ? 1 : 0);
            for (int r = 0; r < bands; ++r)
                layout.row_baselines_mm.push_back(layout.margin_top_mm + usable * (r + 0.5) / bands);
        }
        cfg.layout = layout;
    }

    if (j.contains("text")) {
        const json& t = j["text"];
        check_keys(t, "text.",
                   {"enabled", "lead_names", "lead_name_font_mm", "allow_overlap", "ink_color",
                    "fields"});
        opt(t, "enabled", cfg.text.enabled);
        opt(t, "lead_names", cfg.text.lead_names);
        opt(t, "lead_name_font_mm", cfg.text.lead_name_font_mm);
        opt(t, "allow_overlap", cfg.text.printed.allow_overlap);
        if (t.contains("ink_color"))
            cfg.text.printed.ink_color = rgb_from_json(t["ink_color"], "text.ink_color");
        if (t.contains("fields")) {
            for (const json& f : t["fields"]) {
                check_keys(f, "text.fields.", {"key", "text", "x_mm", "y_mm", "font_size_mm"});
                TemplateField field;
                opt(f, "key", field.key);
                opt(f, "text", field.text);
                opt(f, "x_mm", field.pos_x_mm);
                opt(f, "y_mm", field.pos_y_mm);
                opt(f, "font_size_mm", field.font_size_mm);
                cfg.text.printed.fields.push_back(std::move(field));
            }
        }
    }

    if (j.contains("signal_noise")) {
        const json& s = j["signal_noise"];
        check_keys(s, "signal_noise.", {"kind", "snr_db", "wander_freq_hz", "wander_amp_mv"});
        if (s.contains("kind")) {
            const std::string k = s["kind"].get<std::string>();
            if (k == "none")
                cfg.signal_noise.kind = SignalNoiseSpec::Kind::none;
            else if (k == "awgn")
                cfg.signal_noise.kind = SignalNoiseSpec::Kind::awgn;
            else if (k == "baseline_wander")
                cfg.signal_noise.kind = SignalNoiseSpec::Kind::baseline_wander;
            else if (k == "both")
                cfg.signal_noise.kind = SignalNoiseSpec::Kind::both;
            else
                throw std::runtime_error("config: signal_noise.kind '" + k + "' not recognized");
        }
        opt(s, "snr_db", cfg.signal_noise.snr_db);
        opt(s, "wander_freq_hz", cfg.signal_noise.wander_freq_hz);
        opt(s, "wander_amp_mv", cfg.signal_noise.wander_amp_mv);
    }

    if (j.contains("handwriting")) {
        const json& h = j["handwriting"];
        check_keys(h, "handwriting.",
                   {"enabled", "style_min", "style_max", "count_min", "count_max", "size_px_min",
                    "size_px_max", "lexicon_path", "corpus_path"});
        opt(h, "enabled", cfg.handwriting.enabled);
        opt(h, "style_min", cfg.handwriting.style_min);
        opt(h, "style_max", cfg.handwriting.style_max);
        opt(h, "count_min", cfg.handwriting.count_min);
        opt(h, "count_max", cfg.handwriting.count_max);
        opt(h, "size_px_min", cfg.handwriting.size_px_min);
        opt(h, "size_px_max", cfg.handwriting.size_px_max);
        opt(h, "lexicon_path", cfg.handwriting.lexicon_path);
        opt(h, "corpus_path", cfg.handwriting.corpus_path);
    }

    if (j.contains("creases")) {
        const json& c = j["creases"];
        check_keys(c, "creases.", {"enabled", "n_min", "n_max", "theta_min_deg", "theta_max_deg",
                                   "intensity", "sigma_px", "line_width_px"});
        opt(c, "enabled", cfg.creases.enabled);
        opt(c, "n_min", cfg.creases.n_min);
        opt(c, "n_max", cfg.creases.n_max);
        opt(c, "theta_min_deg", cfg.creases.theta_min_deg);
        opt(c, "theta_max_deg", cfg.creases.theta_max_deg);
        opt(c, "intensity", cfg.creases.intensity);
        opt(c, "sigma_px", cfg.creases.sigma_px);
        opt(c, "line_width_px", cfg.creases.line_width_px);
    }

    if (j.contains("wrinkles")) {
        const json& w = j["wrinkles"];
        check_keys(w, "wrinkles.", {"enabled", "alpha", "block_px", "overlap_px", "texture_w",
                                    "texture_h", "seed_texture_path"});
        opt(w, "enabled", cfg.wrinkles.enabled);
        opt(w, "alpha", cfg.wrinkles.alpha);
        opt(w, "block_px", cfg.wrinkles.block_px);
        opt(w, "overlap_px", cfg.wrinkles.overlap_px);
        opt(w, "texture_w", cfg.wrinkles.texture_w);
        opt(w, "texture_h", cfg.wrinkles.texture_h);
        opt(w, "seed_texture_path", cfg.wrinkles.seed_texture_path);
    }

    if (j.contains("perspective")) {
        const json& p = j["perspective"];
        check_keys(p, "perspective.", {"enabled", "corner_jitter_frac"});
        opt(p, "enabled", cfg.perspective.enabled);
        opt(p, "corner_jitter_frac", cfg.perspective.corner_jitter_frac);
    }

    if (j.contains("imaging")) {
        const json& n = j["imaging"];
        check_keys(n, "imaging.",
                   {"gaussian_eta", "poisson_lambda", "sp_p", "kelvin", "poisson_centered"});
        opt(n, "gaussian_eta", cfg.imaging.gaussian_eta);
        opt(n, "poisson_lambda", cfg.imaging.poisson_lambda);
        if (n.contains("sp_p")) {
            cfg.imaging.sp_p = n["sp_p"].get<double>();
            if (!(cfg.imaging.sp_p >= 0.0 && cfg.imaging.sp_p <= 1.0))
                throw std::runtime_error("config: imaging.sp_p must be in [0, 1]");
        }
        if (n.contains("kelvin") && !n["kelvin"].is_null())
            cfg.imaging.kelvin = n["kelvin"].get<double>();
        opt(n, "poisson_centered", cfg.imaging.poisson_centered);
    }

    opt(j, "with_pulse", cfg.with_pulse);
    opt(j, "master_seed", cfg.master_seed);

    cfg.validate();
    return cfg;
}

DistortionConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

std::string config_to_json_text(const DistortionConfig& cfg) {
    json j;
    j["paper"] = {{"dpi", cfg.paper.dpi},
                  {"width_px", cfg.paper.width_px},
                  {"height_px", cfg.paper.height_px},
                  {"mm_per_s", cfg.paper.mm_per_s},
                  {"mm_per_mv", cfg.paper.mm_per_mv},
                  {"fine_grid_mm", cfg.paper.fine_grid_mm},
                  {"coarse_grid_mm", cfg.paper.coarse_grid_mm},
                  {"bg_color", rgb_to_json(cfg.paper.bg_color)},
                  {"fine_color", rgb_to_json(cfg.paper.fine_color)},
                  {"coarse_color", rgb_to_json(cfg.paper.coarse_color)},
                  {"trace_color", rgb_to_json(cfg.paper.trace_color)},
                  {"trace_width_px", cfg.paper.trace_width_px},
                  {"antialias", cfg.paper.antialias}};
    if (cfg.layout) {
        json l = {{"rows", cfg.layout->rows},
                  {"cols", cfg.layout->cols},
                  {"order", cfg.layout->order},
                  {"row_baselines_mm", cfg.layout->row_baselines_mm},
                  {"margin_left_mm", cfg.layout->margin_left_mm},
                  {"margin_right_mm", cfg.layout->margin_right_mm},
                  {"margin_top_mm", cfg.layout->margin_top_mm},
                  {"margin_bottom_mm", cfg.layout->margin_bottom_mm}};
        if (cfg.layout->rhythm_lead)
            l["rhythm_lead"] = *cfg.layout->rhythm_lead;
        else
            l["rhythm_lead"] = nullptr;
        j["layout"] = l;
    }
    json fields = json::array();
    for (const TemplateField& f : cfg.text.printed.fields)
        fields.push_back({{"key", f.key},
                          {"text", f.text},
                          {"x_mm", f.pos_x_mm},
                          {"y_mm", f.pos_y_mm},
                          {"font_size_mm", f.font_size_mm}});
    j["text"] = {{"enabled", cfg.text.enabled},
                 {"lead_names", cfg.text.lead_names},
                 {"lead_name_font_mm", cfg.text.lead_name_font_mm},
                 {"allow_overlap", cfg.text.printed.allow_overlap},
                 {"ink_color", rgb_to_json(cfg.text.printed.ink_color)},
                 {"fields", fields}};
    const char* kind = "none";
    switch (cfg.signal_noise.kind) {
        case SignalNoiseSpec::Kind::none: kind = "none"; break;
        case SignalNoiseSpec::Kind::awgn: kind = "awgn"; break;
        case SignalNoiseSpec::Kind::baseline_wander: kind = "baseline_wander"; break;
        case SignalNoiseSpec::Kind::both: kind = "both"; break;
    }
    j["signal_noise"] = {{"kind", kind},
                         {"snr_db", cfg.signal_noise.snr_db},
                         {"wander_freq_hz", cfg.signal_noise.wander_freq_hz},
                         {"wander_amp_mv", cfg.signal_noise.wander_amp_mv}};
    j["handwriting"] = {{"enabled", cfg.handwriting.enabled},
                        {"style_min", cfg.handwriting.style_min},
                        {"style_max", cfg.handwriting.style_max},
                        {"count_min", cfg.handwriting.count_min},
                        {"count_max", cfg.handwriting.count_max},
                        {"size_px_min", cfg.handwriting.size_px_min},
                        {"size_px_max", cfg.handwriting.size_px_max},
                        {"lexicon_path", cfg.handwriting.lexicon_path},
                        {"corpus_path", cfg.handwriting.corpus_path}};
    j["creases"] = {{"enabled", cfg.creases.enabled},
                    {"n_min", cfg.creases.n_min},
                    {"n_max", cfg.creases.n_max},
                    {"theta_min_deg", cfg.creases.theta_min_deg},
                    {"theta_max_deg", cfg.creases.theta_max_deg},
                    {"intensity", cfg.creases.intensity},
                    {"sigma_px", cfg.creases.sigma_px},
                    {"line_width_px", cfg.creases.line_width_px}};
    j["wrinkles"] = {{"enabled", cfg.wrinkles.enabled},
                     {"alpha", cfg.wrinkles.alpha},
                     {"block_px", cfg.wrinkles.block_px},
                     {"overlap_px", cfg.wrinkles.overlap_px},
                     {"texture_w", cfg.wrinkles.texture_w},
                     {"texture_h", cfg.wrinkles.texture_h},
                     {"seed_texture_path", cfg.wrinkles.seed_texture_path}};
    j["perspective"] = {{"enabled", cfg.perspective.enabled},
                        {"corner_jitter_frac", cfg.perspective.corner_jitter_frac}};
    json imaging = {{"gaussian_eta", cfg.imaging.gaussian_eta},
                    {"poisson_lambda", cfg.imaging.poisson_lambda},
                    {"sp_p", cfg.imaging.sp_p},
                    {"poisson_centered", cfg.imaging.poisson_centered}};
    imaging["kelvin"] = cfg.imaging.kelvin ? json(*cfg.imaging.kelvin) : json(nullptr);
    j["imaging"] = imaging;
    j["with_pulse"] = cfg.with_pulse;
    j["master_seed"] = cfg.master_seed;
    return j.dump(2) + "\n";
}

namespace {

json trace_to_json(const LeadTrace& t) {
    json poly = json::array();
    for (const PointF& p : t.polyline) poly.push_back(json::array({p.x, p.y}));
    return {{"lead", t.lead_name},       {"baseline_px", t.baseline_px},
            {"cell_x0", t.cell_x0},      {"cell_x1", t.cell_x1},
            {"t_start_s", t.t_start_s},  {"duration_s", t.duration_s},
            {"is_rhythm", t.is_rhythm},  {"clipped", t.clipped},
            {"polyline", std::move(poly)}};
}

LeadTrace trace_from_json(const json& j) {
    LeadTrace t;
    t.lead_name = j.at("lead").get<std::string>();
    t.baseline_px = j.at("baseline_px").get<double>();
    t.cell_x0 = j.at("cell_x0").get<double>();
    t.cell_x1 = j.at("cell_x1").get<double>();
    t.t_start_s = j.at("t_start_s").get<double>();
    t.duration_s = j.at("duration_s").get<double>();
    t.is_rhythm = j.at("is_rhythm").get<bool>();
    t.clipped = j.at("clipped").get<bool>();
    for (const json& p : j.at("polyline")) t.polyline.push_back({p[0].get<double>(), p[1].get<double>()});
    return t;
}

} // namespace

std::string sidecar_to_json(const GroundTruthMeta& meta) {
    json j;
    j["schema_version"] = 1;
    j["record_id"] = meta.record_id;
    j["paper"] = {{"dpi", meta.paper.dpi},
                  {"width_px", meta.paper.width_px},
                  {"height_px", meta.paper.height_px},
                  {"mm_per_s", meta.paper.mm_per_s},
                  {"mm_per_mv", meta.paper.mm_per_mv},
                  {"bg_color", rgb_to_json(meta.paper.bg_color)},
                  {"fine_color", rgb_to_json(meta.paper.fine_color)},
                  {"coarse_color", rgb_to_json(meta.paper.coarse_color)},
                  {"trace_color", rgb_to_json(meta.paper.trace_color)},
                  {"trace_width_px", meta.paper.trace_width_px}};
    j["matrix"] = meta.matrix.m;
    json traces = json::array();
    for (const LeadTrace& t : meta.traces) traces.push_back(trace_to_json(t));
    j["leads"] = std::move(traces);
    json artifacts = json::array();
    for (const ArtifactBox& b : meta.artifacts)
        artifacts.push_back({{"kind", b.kind == ArtifactBox::Kind::printed ? "printed" : "handwritten"},
                             {"bbox", json::array({b.x0, b.y0, b.x1, b.y1})},
                             {"text", b.text}});
    j["artifacts"] = std::move(artifacts);
    if (meta.crease_params)
        j["creases"] = {{"n", meta.crease_params->n},
                        {"theta_deg", meta.crease_params->theta_deg},
                        {"intensity", meta.crease_params->intensity},
                        {"sigma_px", meta.crease_params->sigma_px},
                        {"line_width_px", meta.crease_params->line_width_px}};
    j["timings_s"] = meta.stage_seconds;
    j["total_s"] = meta.total_seconds;
    j["warnings"] = meta.warnings;
    return j.dump(2) + "\n";
}

GroundTruthMeta sidecar_from_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    GroundTruthMeta meta;
    meta.record_id = j.at("record_id").get<std::string>();
    const json& p = j.at("paper");
    meta.paper.dpi = p.at("dpi").get<double>();
    meta.paper.width_px = p.at("width_px").get<int>();
    meta.paper.height_px = p.at("height_px").get<int>();
    meta.paper.mm_per_s = p.at("mm_per_s").get<double>();
    meta.paper.mm_per_mv = p.at("mm_per_mv").get<double>();
    meta.paper.bg_color = rgb_from_json(p.at("bg_color"), "paper.bg_color");
    meta.paper.fine_color = rgb_from_json(p.at("fine_color"), "paper.fine_color");
    meta.paper.coarse_color = rgb_from_json(p.at("coarse_color"), "paper.coarse_color");
    meta.paper.trace_color = rgb_from_json(p.at("trace_color"), "paper.trace_color");
    meta.paper.trace_width_px = p.at("trace_width_px").get<int>();
    meta.matrix.m = j.at("matrix").get<std::array<double, 9>>();
    for (const json& t : j.at("leads")) meta.traces.push_back(trace_from_json(t));
    for (const json& b : j.at("artifacts")) {
        ArtifactBox box;
        box.kind = b.at("kind").get<std::string>() == "printed" ? ArtifactBox::Kind::printed
                                                                : ArtifactBox::Kind::handwritten;
        box.x0 = b.at("bbox")[0].get<int>();
        box.y0 = b.at("bbox")[1].get<int>();
        box.x1 = b.at("bbox")[2].get<int>();
        box.y1 = b.at("bbox")[3].get<int>();
        box.text = b.at("text").get<std::string>();
        meta.artifacts.push_back(std::move(box));
    }
    if (j.contains("creases")) {
        CreaseSpec c;
        c.n = j["creases"].at("n").get<int>();
        c.theta_deg = j["creases"].at("theta_deg").get<double>();
        c.intensity = j["creases"].at("intensity").get<double>();
        c.sigma_px = j["creases"].at("sigma_px").get<double>();
        c.line_width_px = j["creases"].at("line_width_px").get<int>();
        meta.crease_params = c;
    }
    if (j.contains("timings_s"))
        meta.stage_seconds = j["timings_s"].get<std::map<std::string, double>>();
    if (j.contains("total_s")) meta.total_seconds = j["total_s"].get<double>();
    if (j.contains("warnings")) meta.warnings = j["warnings"].get<std::vector<std::string>>();
    return meta;
}

std::pair<RasterImage, GroundTruthMeta> generate_one(const EcgRecord& rec,
                                                     const DistortionConfig& cfg,
                                                     std::uint64_t record_index,
                                                     const std::string& record_id) {
    cfg.validate();
    rec.validate();
    const auto t_begin = std::chrono::steady_clock::now();

    GroundTruthMeta meta;
    meta.record_id = record_id.empty() ? "record_" + std::to_string(record_index) : record_id;
    meta.paper = cfg.paper;

    EcgRecord working = rec;
    if (cfg.signal_noise.kind != SignalNoiseSpec::Kind::none)
        working = add_signal_noise(rec, cfg.signal_noise,
                                   derive_seed(cfg.master_seed, record_index, kStageSignalNoise));

    // Distortionless render.
    auto t0 = std::chrono::steady_clock::now();
    const LeadLayout layout = cfg.layout ? *cfg.layout : default_12lead_layout(cfg.paper);
    RasterImage img = render_blank_paper(cfg.paper);
    meta.traces = plot_record(img, working, layout, cfg.paper, cfg.with_pulse);
    for (const LeadTrace& t : meta.traces)
        if (t.clipped)
            meta.warnings.push_back("lead '" + t.lead_name + "' clipped at page bounds");
    meta.stage_seconds["render"] = stage_seconds(t0);

    // Printed text.
    if (cfg.text.enabled) {
        t0 = std::chrono::steady_clock::now();
        PrintedTemplate tpl = cfg.text.printed;
        if (cfg.text.lead_names) {
            const double label_rise_mm = 4.0;
            for (const LeadTrace& t : meta.traces) {
                TemplateField f;
                f.key = "lead_" + t.lead_name + (t.is_rhythm ? "_rhythm" : "");
                f.text = t.lead_name;
                f.pos_x_mm = (t.cell_x0 + 4.0) / cfg.paper.px_per_mm();
                f.pos_y_mm = t.baseline_px / cfg.paper.px_per_mm() - cfg.paper.mm_per_mv -
                             label_rise_mm;
                f.font_size_mm = cfg.text.lead_name_font_mm;
                tpl.fields.push_back(std::move(f));
            }
        }
        std::vector<Polyline> polylines;
        for (const LeadTrace& t : meta.traces) polylines.push_back(t.polyline);
        const PrintedOverlayResult printed = overlay_printed_text(img, tpl, polylines, cfg.paper);
        meta.artifacts.insert(meta.artifacts.end(), printed.boxes.begin(), printed.boxes.end());
        meta.warnings.insert(meta.warnings.end(), printed.warnings.begin(), printed.warnings.end());
        meta.stage_seconds["printed_text"] = stage_seconds(t0);
    }

    // Handwritten annotations.
    if (cfg.handwriting.enabled && cfg.handwriting.count_max > 0) {
        t0 = std::chrono::steady_clock::now();
        Rng rng(derive_seed(cfg.master_seed, record_index, kStageHandwriting));
        const std::vector<std::string> lexicon = cfg.handwriting.lexicon_path.empty()
                                                     ? builtin_lexicon()
                                                     : load_lexicon(cfg.handwriting.lexicon_path);
        std::string corpus;
        if (!cfg.handwriting.corpus_path.empty()) {
            std::ifstream in(cfg.handwriting.corpus_path);
            if (!in)
                throw std::runtime_error("generate_one: cannot open corpus " +
                                         cfg.handwriting.corpus_path);
            std::stringstream ss;
            ss << in.rdbuf();
            corpus = ss.str();
        }
        const int count =
            static_cast<int>(rng.next_int(cfg.handwriting.count_min, cfg.handwriting.count_max));
        const KeywordSelection sel =
            select_keywords(corpus, lexicon, count, rng.next_u64());
        if (sel.lexicon_fallback && !corpus.empty())
            meta.warnings.push_back("handwriting: corpus had no lexicon matches");
        const Rgb ink{25, 25, 70}; // blue-black
        for (const std::string& word : sel.keywords) {
            const int style_id =
                static_cast<int>(rng.next_int(cfg.handwriting.style_min, cfg.handwriting.style_max));
            const double size_px =
                rng.next_uniform(cfg.handwriting.size_px_min, cfg.handwriting.size_px_max);
            const HandwritingStencil stencil =
                synthesize_handwriting(word, handwriting_style(style_id), size_px, rng.next_u64());
            if (stencil.width > img.width || stencil.height > img.height) {
                meta.warnings.push_back("handwriting: '" + word + "' too large for page, skipped");
                continue;
            }
            meta.artifacts.push_back(
                overlay_handwriting(img, stencil, std::nullopt, ink, rng.next_u64(), 0.9, word));
        }
        meta.stage_seconds["handwriting"] = stage_seconds(t0);
    }

    // Creases and wrinkles.
    if (cfg.creases.enabled || cfg.wrinkles.enabled) {
        t0 = std::chrono::steady_clock::now();
        if (cfg.wrinkles.enabled && cfg.wrinkles.alpha > 0.0) {
            const std::uint64_t wseed = derive_seed(cfg.master_seed, record_index, kStageWrinkle);
            QuiltSpec quilt;
            quilt.block_px = cfg.wrinkles.block_px;
            quilt.overlap_px = cfg.wrinkles.overlap_px;
            quilt.out_w = cfg.wrinkles.texture_w;
            quilt.out_h = cfg.wrinkles.texture_h;
            quilt.rng_seed = derive_seed(wseed, 1);
            quilt.seed_texture = cfg.wrinkles.seed_texture_path.empty()
                                     ? make_noise_seed_texture(256, 256, derive_seed(wseed, 2))
                                     : read_image(cfg.wrinkles.seed_texture_path);
            const RasterImage texture = quilt_texture(quilt);
            img = blend_wrinkles(img, texture, cfg.wrinkles.alpha);
        }
        if (cfg.creases.enabled) {
            Rng rng(derive_seed(cfg.master_seed, record_index, kStageCrease));
            CreaseSpec crease;
            crease.n = static_cast<int>(rng.next_int(cfg.creases.n_min, cfg.creases.n_max));
            crease.theta_deg = rng.next_uniform(cfg.creases.theta_min_deg, cfg.creases.theta_max_deg);
            crease.intensity = cfg.creases.intensity;
            crease.sigma_px = cfg.creases.sigma_px;
            crease.line_width_px = cfg.creases.line_width_px;
            img = apply_creases(img, crease);
            meta.crease_params = crease;
        }
        meta.stage_seconds["creases_wrinkles"] = stage_seconds(t0);
    }

    // Perspective.
    meta.matrix = Matrix3::identity();
    if (cfg.perspective.enabled && cfg.perspective.corner_jitter_frac > 0.0) {
        t0 = std::chrono::steady_clock::now();
        Rng rng(derive_seed(cfg.master_seed, record_index, kStagePerspective));
        const double w = cfg.paper.width_px, h = cfg.paper.height_px;
        const double jitter = cfg.perspective.corner_jitter_frac * std::hypot(w, h);
        const std::array<PointF, 4> src{{{0, 0}, {w, 0}, {w, h}, {0, h}}};
        std::array<PointF, 4> dst;
        for (int i = 0; i < 4; ++i)
            dst[i] = {src[i].x + rng.next_uniform(-jitter, jitter),
                      src[i].y + rng.next_uniform(-jitter, jitter)};
        meta.matrix = projective_from_corners(src, dst);
        const Rgb backdrop{168, 162, 155};
        img = warp_image(img, meta.matrix, backdrop);
        for (LeadTrace& t : meta.traces) t.polyline = transform_points(t.polyline, meta.matrix);
        for (ArtifactBox& b : meta.artifacts) {
            const std::vector<PointF> corners = transform_points(
                {{static_cast<double>(b.x0), static_cast<double>(b.y0)},
                 {static_cast<double>(b.x1), static_cast<double>(b.y0)},
                 {static_cast<double>(b.x0), static_cast<double>(b.y1)},
                 {static_cast<double>(b.x1), static_cast<double>(b.y1)}},
                meta.matrix);
            b.x0 = static_cast<int>(std::floor(std::min({corners[0].x, corners[1].x, corners[2].x, corners[3].x})));
            b.x1 = static_cast<int>(std::ceil(std::max({corners[0].x, corners[1].x, corners[2].x, corners[3].x})));
            b.y0 = static_cast<int>(std::floor(std::min({corners[0].y, corners[1].y, corners[2].y, corners[3].y})));
            b.y1 = static_cast<int>(std::ceil(std::max({corners[0].y, corners[1].y, corners[2].y, corners[3].y})));
        }
        meta.stage_seconds["perspective"] = stage_seconds(t0);
    }

    // Imaging noise.
    if (cfg.imaging.gaussian_eta > 0.0 || cfg.imaging.poisson_lambda > 0.0 ||
        cfg.imaging.sp_p > 0.0 || cfg.imaging.kelvin) {
        t0 = std::chrono::steady_clock::now();
        img = apply_imaging_noise(img, cfg.imaging,
                                  derive_seed(cfg.master_seed, record_index, kStageImaging));
        meta.stage_seconds["imaging_noise"] = stage_seconds(t0);
    }

    meta.total_seconds = stage_seconds(t_begin);
    return {std::move(img), std::move(meta)};
}

std::map<std::string, double> BatchManifest::mean_stage_seconds() const {
    std::map<std::string, double> sums;
    std::map<std::string, std::size_t> counts;
    for (const ManifestEntry& e : entries) {
        if (!e.ok) continue;
        for (const auto& [stage, secs] : e.stage_seconds) {
            sums[stage] += secs;
            ++counts[stage];
        }
    }
    for (auto& [stage, total] : sums) total /= static_cast<double>(counts[stage]);
    return sums;
}

double BatchManifest::mean_total_seconds() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const ManifestEntry& e : entries)
        if (e.ok) {
            sum += e.total_seconds;
            ++n;
        }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

BatchManifest generate_batch(const std::string& input_dir, const std::string& out_dir,
                             const DistortionConfig& cfg, int workers) {
    if (workers < 1) throw std::runtime_error("generate_batch: workers must be >= 1");
    std::vector<fs::path> inputs;
    for (const auto& entry : fs::directory_iterator(input_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".csv" || ext == ".txt" || ext == ".wfdb") inputs.push_back(entry.path());
    }
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty())
        throw std::runtime_error("generate_batch: no .csv/.txt records in " + input_dir);
    fs::create_directories(out_dir);

    BatchManifest manifest;
    manifest.entries.resize(inputs.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= inputs.size()) return;
            ManifestEntry& entry = manifest.entries[i];
            entry.record_id = inputs[i].stem().string();
            try {
                const EcgRecord rec = parse_record_file(inputs[i].string());
                auto [img, meta] = generate_one(rec, cfg, i, entry.record_id);
                const fs::path img_path = fs::path(out_dir) / (entry.record_id + ".png");
                const fs::path sc_path = fs::path(out_dir) / (entry.record_id + ".json");
                write_png(img_path.string(), img, cfg.paper.dpi);
                std::ofstream sc(sc_path);
                sc << sidecar_to_json(meta);
                if (!sc) throw std::runtime_error("cannot write sidecar " + sc_path.string());
                entry.image_path = img_path.string();
                entry.sidecar_path = sc_path.string();
                entry.stage_seconds = meta.stage_seconds;
                entry.total_seconds = meta.total_seconds;
                entry.ok = true;
            } catch (const std::exception& ex) {
                entry.ok = false;
                entry.error = ex.what();
            }
        }
    };

    std::vector<std::thread> pool;
    const int nthreads = std::min<int>(workers, static_cast<int>(inputs.size()));
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    for (const ManifestEntry& e : manifest.entries)
        if (!e.ok) ++manifest.failures;
    return manifest;
}

std::string manifest_to_json(const BatchManifest& manifest) {
    json j;
    json entries = json::array();
    for (const ManifestEntry& e : manifest.entries)
        entries.push_back({{"record_id", e.record_id},
                           {"image", e.image_path},
                           {"sidecar", e.sidecar_path},
                           {"ok", e.ok},
                           {"error", e.error},
                           {"timings_s", e.stage_seconds},
                           {"total_s", e.total_seconds}});
    j["entries"] = std::move(entries);
    j["failures"] = manifest.failures;
    j["mean_stage_seconds"] = manifest.mean_stage_seconds();
    j["mean_total_seconds"] = manifest.mean_total_seconds();
    return j.dump(2) + "\n";
}

BatchManifest manifest_from_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    BatchManifest manifest;
    for (const json& e : j.at("entries")) {
        ManifestEntry entry;
        entry.record_id = e.at("record_id").get<std::string>();
        entry.image_path = e.at("image").get<std::string>();
        entry.sidecar_path = e.at("sidecar").get<std::string>();
        entry.ok = e.at("ok").get<bool>();
        entry.error = e.at("error").get<std::string>();
        entry.stage_seconds = e.at("timings_s").get<std::map<std::string, double>>();
        entry.total_seconds = e.at("total_s").get<double>();
        manifest.entries.push_back(std::move(entry));
    }
    manifest.failures = j.at("failures").get<std::size_t>();
    return manifest;
}

std::string report_timings(const BatchManifest& manifest) {
    if (manifest.entries.empty()) throw std::runtime_error("report_timings: empty manifest");
    const std::map<std::string, double> means = manifest.mean_stage_seconds();
    // Fixed row order; the starred rows correspond to the conventional
    // per-stage breakdown of generation pipelines of this kind.
    const std::vector<std::pair<std::string, std::string>> rows = {
        {"render", "Distortionless ECG generation"},
        {"printed_text", "Printed text artifacts"},
        {"handwriting", "Handwritten text artifacts"},
        {"creases_wrinkles", "Wrinkles and creases"},
        {"perspective", "Perspective transforms"},
        {"imaging_noise", "Imaging noise"},
    };
    std::ostringstream out;
    out << std::left << std::setw(36) << "Step" << std::right << std::setw(14) << "Mean time (s)"
        << "\n";
    out << std::string(50, '-') << "\n";
    for (const auto& [key, label] : rows) {
        const auto it = means.find(key);
        if (it == means.end()) continue;
        out << std::left << std::setw(36) << label << std::right << std::setw(14) << std::fixed
            << std::setprecision(4) << it->second << "\n";
    }
    out << std::string(50, '-') << "\n";
    out << std::left << std::setw(36) << "Total" << std::right << std::setw(14) << std::fixed
        << std::setprecision(4) << manifest.mean_total_seconds() << "\n";
    return out.str();
}

} // namespace ecggen
