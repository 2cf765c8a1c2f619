#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ecggen/eval.hpp"
#include "ecggen/image_io.hpp"
#include "ecggen/pipeline.hpp"

namespace fs = std::filesystem;
using namespace ecggen;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path);
}

int run_generate(const std::string& input_dir, const std::string& out_dir,
                 const std::string& config_path, int workers, std::uint64_t seed, bool seed_set) {
    DistortionConfig cfg =
        config_path.empty() ? DistortionConfig{} : load_config(config_path);
    if (seed_set) cfg.master_seed = seed;
    cfg.validate();
    const BatchManifest manifest = generate_batch(input_dir, out_dir, cfg, workers);
    spit((fs::path(out_dir) / "manifest.json").string(), manifest_to_json(manifest));
    std::cout << report_timings(manifest);
    std::cout << manifest.entries.size() - manifest.failures << "/" << manifest.entries.size()
              << " records generated, manifest at " << out_dir << "/manifest.json\n";
    for (const ManifestEntry& e : manifest.entries)
        if (!e.ok) std::cerr << "FAILED " << e.record_id << ": " << e.error << "\n";
    return manifest.failures == 0 ? 0 : 1;
}

int run_timings(const std::string& manifest_path) {
    const BatchManifest manifest = manifest_from_json(slurp(manifest_path));
    std::cout << report_timings(manifest);
    return 0;
}

int run_eval(const std::string& images_dir, const std::string& out_path,
             const std::string& hist_path) {
    std::vector<fs::path> sidecars;
    for (const auto& entry : fs::directory_iterator(images_dir)) {
        if (entry.path().extension() == ".json" && entry.path().filename() != "manifest.json")
            sidecars.push_back(entry.path());
    }
    std::sort(sidecars.begin(), sidecars.end());
    if (sidecars.empty()) throw std::runtime_error("no sidecars in " + images_dir);

    std::vector<LeadScore> scores;
    for (const fs::path& sc : sidecars) {
        fs::path img_path = sc;
        img_path.replace_extension(".png");
        if (!fs::exists(img_path)) {
            std::cerr << "skipping " << sc << ": no matching image\n";
            continue;
        }
        const GroundTruthMeta meta = sidecar_from_json(slurp(sc.string()));
        const RasterImage img = read_image(img_path.string());
        std::vector<LeadScore> lead_scores = evaluate_image(img, meta);
        double mean = 0.0;
        for (const LeadScore& s : lead_scores) mean += s.snr_db;
        if (!lead_scores.empty()) mean /= static_cast<double>(lead_scores.size());
        std::cout << meta.record_id << ": mean SNR " << mean << " dB over " << lead_scores.size()
                  << " leads\n";
        scores.insert(scores.end(), lead_scores.begin(), lead_scores.end());
    }
    const EvalReport report = build_report(std::move(scores));
    spit(out_path, report_to_json(report));
    if (!hist_path.empty()) spit(hist_path, histogram_to_csv(report));
    std::cout << "overall mean SNR " << report.snr_mean_db << " dB (std " << report.snr_std_db
              << ") across " << report.scores.size() << " leads; report at " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic ECG paper image generator and round-trip evaluator"};
    app.require_subcommand(1);

    std::string input_dir, out_dir, config_path, manifest_path, images_dir;
    std::string report_path = "report.json", hist_path;
    int workers = 1;
    std::uint64_t seed = 0;

    CLI::App* gen = app.add_subcommand("generate", "Render a directory of ECG records to paper images");
    gen->add_option("--input", input_dir, "Directory of .csv / .txt records")->required();
    gen->add_option("--out", out_dir, "Output directory")->required();
    gen->add_option("--config", config_path, "JSON pipeline config (default: built-in defaults)");
    gen->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    CLI::Option* seed_opt = gen->add_option("--seed", seed, "Master seed override");

    CLI::App* tim = app.add_subcommand("timings", "Print the per-stage timing table of a manifest");
    tim->add_option("--manifest", manifest_path, "manifest.json path")->required();

    CLI::App* ev = app.add_subcommand("eval", "Digitize generated images and score against ground truth");
    ev->add_option("--images", images_dir, "Directory of .png + sidecar .json pairs")->required();
    ev->add_option("--out", report_path, "Report JSON output path");
    ev->add_option("--histogram", hist_path, "Optional SNR histogram CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_generate(input_dir, out_dir, config_path, workers, seed,
                                               seed_opt->count() > 0);
        if (tim->parsed()) return run_timings(manifest_path);
        if (ev->parsed()) return run_eval(images_dir, report_path, hist_path);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
