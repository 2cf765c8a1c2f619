#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecggen/grid_renderer.hpp"
#include "ecggen/raster.hpp"

namespace ecggen {

struct TemplateField {
    std::string key;
    std::string text;
    double pos_x_mm = 0.0;
    double pos_y_mm = 0.0;
    double font_size_mm = 3.0;
};

struct PrintedTemplate {
    std::vector<TemplateField> fields;
    bool allow_overlap = true;
    Rgb ink_color{15, 15, 25};

    void validate(const PaperSpec& spec) const;
};

struct HandwritingStyle {
    int style_id = 1; // 1..7
    double slant_deg = 0.0;
    double jitter_px = 0.0;
    int stroke_width_px = 2;
    double baseline_wobble_px = 0.0;
    double letter_spacing_scale = 1.0;

    void validate() const;
};

/// The seven bundled style parameter sets.
HandwritingStyle handwriting_style(int style_id);

struct ArtifactBox {
    enum class Kind { printed, handwritten };
    Kind kind = Kind::printed;
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    std::string text;
};

struct PrintedOverlayResult {
    std::vector<ArtifactBox> boxes;
    std::vector<std::string> warnings; // fields dropped for lack of free space
};

/// Blit every template field with the bundled bitmap font. When
/// allow_overlap is false, fields colliding with a lead polyline bbox are
/// spiral-searched to a free spot or dropped with a warning.
PrintedOverlayResult overlay_printed_text(RasterImage& img, const PrintedTemplate& tpl,
                                          const std::vector<Polyline>& lead_polylines,
                                          const PaperSpec& spec);

struct KeywordSelection {
    std::vector<std::string> keywords;
    bool lexicon_fallback = false; // corpus had no matches; sampled the lexicon directly
};

/// Exact-phrase lexicon matching over the whitespace/punctuation-tokenized,
/// lowercased corpus; n uniform draws (without replacement while possible).
KeywordSelection select_keywords(const std::string& corpus, const std::vector<std::string>& lexicon,
                                 int n, std::uint64_t seed);

/// One phrase per line, '#' comments, UTF-8.
std::vector<std::string> load_lexicon(const std::string& path);
const std::vector<std::string>& builtin_lexicon();

/// Grayscale alpha mask of handwritten-looking text.
struct HandwritingStencil {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> alpha; // row-major
    std::vector<double> advances;    // cumulative pen advance after each glyph
    bool had_unsupported = false;    // squiggle-substituted characters present
};

/// Stroke-template glyphs perturbed by shear, per-vertex jitter and
/// sinusoidal baseline wobble; deterministic in seed.
HandwritingStencil synthesize_handwriting(const std::string& text, const HandwritingStyle& style,
                                          double size_px, std::uint64_t seed);

/// Alpha-composite ink through the stencil. Without an explicit position the
/// placement is sampled uniformly among fully-on-page positions.
ArtifactBox overlay_handwriting(RasterImage& img, const HandwritingStencil& stencil,
                                std::optional<std::pair<int, int>> pos_px, Rgb ink_color,
                                std::uint64_t seed, double opacity = 0.9,
                                const std::string& text = {});

} // namespace ecggen
