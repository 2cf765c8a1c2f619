#include "ecggen/text_artifacts.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ecggen/rng.hpp"
#include "font5x7.hpp"
#include "hand_strokes.hpp"

namespace ecggen {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct BoxF {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool intersects(const BoxF& o) const {
        return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
    }
};

BoxF polyline_bbox(const Polyline& p) {
    BoxF b{1e30, 1e30, -1e30, -1e30};
    for (const PointF& v : p) {
        b.x0 = std::min(b.x0, v.x);
        b.y0 = std::min(b.y0, v.y);
        b.x1 = std::max(b.x1, v.x);
        b.y1 = std::max(b.y1, v.y);
    }
    return b;
}

int font_scale(double size_px) {
    return std::max(1, static_cast<int>(std::lround(size_px / 7.0)));
}

int text_width_px(const std::string& text, int scale) {
    return text.empty() ? 0 : static_cast<int>(text.size()) * 6 * scale - scale;
}

void blit_text(RasterImage& img, const std::string& text, int x, int y, int scale, Rgb ink) {
    int cx = x;
    for (char ch : text) {
        const unsigned code = static_cast<unsigned char>(ch);
        if (code >= 32 && code <= 126) {
            const std::uint8_t* glyph = kFont5x7[code - 32];
            for (int col = 0; col < 5; ++col)
                for (int row = 0; row < 7; ++row)
                    if (glyph[col] & (1u << row))
                        fill_rect(img, cx + col * scale, y + row * scale, cx + col * scale + scale - 1,
                                  y + row * scale + scale - 1, ink);
        }
        cx += 6 * scale;
    }
}

std::vector<std::string> tokenize_lower(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        if (std::isalnum(static_cast<unsigned char>(ch))) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

bool contains_phrase(const std::vector<std::string>& tokens, const std::vector<std::string>& phrase) {
    if (phrase.empty() || phrase.size() > tokens.size()) return false;
    for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < phrase.size(); ++j)
            if (tokens[i + j] != phrase[j]) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

using StrokeF = std::vector<PointF>;

void stamp_disc(HandwritingStencil& st, double cx, double cy, double radius) {
    const int r = std::max(1, static_cast<int>(std::ceil(radius)));
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
            if (dx * dx + dy * dy > radius * radius + 0.26) continue;
            const int x = static_cast<int>(std::lround(cx)) + dx;
            const int y = static_cast<int>(std::lround(cy)) + dy;
            if (x >= 0 && x < st.width && y >= 0 && y < st.height)
                st.alpha[static_cast<std::size_t>(y) * st.width + x] = 255;
        }
}

void rasterize_stroke(HandwritingStencil& st, const StrokeF& stroke, double radius) {
    for (std::size_t i = 0; i + 1 < stroke.size(); ++i) {
        const double dx = stroke[i + 1].x - stroke[i].x;
        const double dy = stroke[i + 1].y - stroke[i].y;
        const int steps = std::max(1, static_cast<int>(std::ceil(std::hypot(dx, dy))));
        for (int s = 0; s <= steps; ++s) {
            const double t = static_cast<double>(s) / steps;
            stamp_disc(st, stroke[i].x + t * dx, stroke[i].y + t * dy, radius);
        }
    }
    if (stroke.size() == 1) stamp_disc(st, stroke[0].x, stroke[0].y, radius);
}

} // namespace

void PrintedTemplate::validate(const PaperSpec& spec) const {
    for (const TemplateField& f : fields) {
        if (f.font_size_mm <= 0.0)
            throw std::runtime_error("PrintedTemplate: font_size_mm must be positive for '" + f.key + "'");
        if (f.pos_x_mm < 0.0 || f.pos_y_mm < 0.0 || f.pos_x_mm > spec.page_width_mm() ||
            f.pos_y_mm > spec.page_height_mm())
            throw std::runtime_error("PrintedTemplate: field '" + f.key + "' positioned off page");
    }
}

void HandwritingStyle::validate() const {
    if (style_id < 1 || style_id > 7)
        throw std::runtime_error("HandwritingStyle: style_id must be in [1, 7]");
    if (jitter_px < 0.0) throw std::runtime_error("HandwritingStyle: jitter_px must be >= 0");
    if (stroke_width_px < 1) throw std::runtime_error("HandwritingStyle: stroke_width_px must be >= 1");
}

HandwritingStyle handwriting_style(int style_id) {
    static const HandwritingStyle styles[7] = {
        {1, 0.0, 0.6, 2, 0.8, 1.00},
        {2, 12.0, 0.8, 2, 1.2, 1.05},
        {3, -8.0, 1.0, 3, 1.5, 1.10},
        {4, 18.0, 0.5, 2, 0.6, 0.92},
        {5, 5.0, 1.4, 3, 2.0, 1.20},
        {6, -15.0, 0.7, 2, 1.0, 1.00},
        {7, 25.0, 1.2, 4, 1.6, 1.15},
    };
    if (style_id < 1 || style_id > 7)
        throw std::runtime_error("handwriting_style: style_id must be in [1, 7]");
    return styles[style_id - 1];
}

PrintedOverlayResult overlay_printed_text(RasterImage& img, const PrintedTemplate& tpl,
                                          const std::vector<Polyline>& lead_polylines,
                                          const PaperSpec& spec) {
    tpl.validate(spec);
    std::vector<BoxF> trace_boxes;
    trace_boxes.reserve(lead_polylines.size());
    for (const Polyline& p : lead_polylines)
        if (!p.empty()) trace_boxes.push_back(polyline_bbox(p));

    PrintedOverlayResult result;
    const double step_px = to_pixels(spec, 2.0); // spiral search step
    for (const TemplateField& field : tpl.fields) {
        const double size_px = to_pixels(spec, field.font_size_mm);
        const int scale = font_scale(size_px);
        const int w = text_width_px(field.text, scale);
        const int h = 7 * scale;
        if (field.text.empty()) continue;

        const int base_x = static_cast<int>(std::lround(to_pixels(spec, field.pos_x_mm)));
        const int base_y = static_cast<int>(std::lround(to_pixels(spec, field.pos_y_mm)));

        auto placement_ok = [&](int x, int y) {
            if (x < 0 || y < 0 || x + w > img.width || y + h > img.height) return false;
            if (tpl.allow_overlap) return true;
            const BoxF box{static_cast<double>(x), static_cast<double>(y),
                           static_cast<double>(x + w), static_cast<double>(y + h)};
            for (const BoxF& tb : trace_boxes)
                if (box.intersects(tb)) return false;
            return true;
        };

        int px = base_x, py = base_y;
        bool placed = placement_ok(px, py);
        if (!placed && !tpl.allow_overlap) {
            static const int dirs[8][2] = {{1, 0},  {1, 1},  {0, 1},  {-1, 1},
                                           {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
            for (int ring = 1; ring <= 50 && !placed; ++ring)
                for (const auto& d : dirs) {
                    const int cx = base_x + static_cast<int>(std::lround(d[0] * ring * step_px));
                    const int cy = base_y + static_cast<int>(std::lround(d[1] * ring * step_px));
                    if (placement_ok(cx, cy)) {
                        px = cx;
                        py = cy;
                        placed = true;
                        break;
                    }
                }
        }
        if (!placed) {
            result.warnings.push_back("dropped field '" + field.key + "': no overlap-free position");
            continue;
        }
        blit_text(img, field.text, px, py, scale, tpl.ink_color);
        result.boxes.push_back(
            {ArtifactBox::Kind::printed, px, py, px + w, py + h, field.text});
    }
    return result;
}

KeywordSelection select_keywords(const std::string& corpus, const std::vector<std::string>& lexicon,
                                 int n, std::uint64_t seed) {
    if (n < 0) throw std::runtime_error("select_keywords: n must be >= 0");
    if (lexicon.empty()) throw std::runtime_error("select_keywords: empty lexicon");
    KeywordSelection sel;
    if (n == 0) return sel;

    const std::vector<std::string> tokens = tokenize_lower(corpus);
    std::vector<std::string> matches;
    for (const std::string& phrase : lexicon)
        if (contains_phrase(tokens, tokenize_lower(phrase))) matches.push_back(phrase);

    const std::vector<std::string>* pool = &matches;
    if (matches.empty()) {
        sel.lexicon_fallback = true;
        pool = &lexicon;
    }

    Rng rng(seed);
    if (static_cast<std::size_t>(n) <= pool->size()) {
        // Partial Fisher-Yates for sampling without replacement.
        std::vector<std::size_t> idx(pool->size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (int k = 0; k < n; ++k) {
            const auto j = static_cast<std::size_t>(
                rng.next_int(k, static_cast<std::int64_t>(idx.size()) - 1));
            std::swap(idx[k], idx[j]);
            sel.keywords.push_back((*pool)[idx[k]]);
        }
    } else {
        for (int k = 0; k < n; ++k)
            sel.keywords.push_back(
                (*pool)[static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(pool->size()) - 1))]);
    }
    return sel;
}

std::vector<std::string> load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_lexicon: cannot open " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        const auto b = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(a, b - a + 1));
    }
    if (out.empty()) throw std::runtime_error("load_lexicon: no phrases in " + path);
    return out;
}

const std::vector<std::string>& builtin_lexicon() {
    static const std::vector<std::string> lex = {
        "atrial fibrillation", "sinus rhythm", "sinus tachycardia", "sinus bradycardia",
        "left ventricular hypertrophy", "lvh", "right bundle branch block", "rbbb",
        "left bundle branch block", "lbbb", "myocardial infarction", "st elevation",
        "st depression", "t wave inversion", "premature ventricular contraction", "pvc",
        "premature atrial contraction", "first degree av block", "prolonged qt",
        "qt interval", "pr interval", "qrs duration", "axis deviation", "low voltage",
        "ischemia", "arrhythmia", "tachycardia", "bradycardia", "normal ecg",
        "atrial flutter", "ventricular tachycardia", "wpw", "pacemaker", "ectopic beats",
        "poor r wave progression", "nonspecific st changes", "biventricular hypertrophy",
        "cardiomyopathy", "pericarditis", "hyperkalemia",
    };
    return lex;
}

HandwritingStencil synthesize_handwriting(const std::string& text, const HandwritingStyle& style,
                                          double size_px, std::uint64_t seed) {
    style.validate();
    if (text.empty()) throw std::runtime_error("synthesize_handwriting: empty text");
    if (size_px < 8.0) throw std::runtime_error("synthesize_handwriting: size_px must be >= 8");
    for (char c : text)
        if (static_cast<unsigned char>(c) < 32 || static_cast<unsigned char>(c) > 126)
            throw std::runtime_error("synthesize_handwriting: non-printable character in text");

    Rng rng(seed);
    const double shear = std::tan(style.slant_deg * kPi / 180.0);
    const double wobble_period = 6.0 * size_px;
    const double wobble_phase =
        style.baseline_wobble_px > 0.0 ? rng.next_uniform(0.0, 2.0 * kPi) : 0.0;

    HandwritingStencil st;
    std::vector<StrokeF> strokes;
    std::vector<double> advances;
    double cursor = 0.0;
    PointF prev_end{};
    bool have_prev_end = false;

    for (char c : text) {
        const GlyphStrokes* glyph = lookup_glyph(c);
        if (!glyph) {
            glyph = &squiggle_glyph();
            st.had_unsupported = true;
        }
        PointF first_pt{};
        bool first_set = false;
        for (const auto& tstroke : glyph->strokes) {
            StrokeF out;
            out.reserve(tstroke.size());
            for (const auto& [tx, ty] : tstroke) {
                double x = cursor + tx * size_px;
                double y = ty * size_px;
                x += shear * (size_px - y);
                if (style.jitter_px > 0.0) {
                    x += style.jitter_px * rng.next_normal();
                    y += style.jitter_px * rng.next_normal();
                }
                if (style.baseline_wobble_px > 0.0)
                    y += style.baseline_wobble_px * std::sin(2.0 * kPi * x / wobble_period + wobble_phase);
                out.push_back({x, y});
            }
            if (!out.empty()) {
                if (!first_set) {
                    first_pt = out.front();
                    first_set = true;
                }
                strokes.push_back(std::move(out));
            }
        }
        // Cursive connector from the previous glyph's pen-up point.
        if (have_prev_end && first_set && c != ' ') {
            const PointF a = prev_end, b = first_pt;
            if (std::hypot(b.x - a.x, b.y - a.y) < 1.6 * size_px) {
                const PointF ctrl{(a.x + b.x) / 2.0, std::max(a.y, b.y) + 0.12 * size_px};
                StrokeF conn;
                for (int s = 0; s <= 8; ++s) {
                    const double t = s / 8.0;
                    const double omt = 1.0 - t;
                    conn.push_back({omt * omt * a.x + 2 * omt * t * ctrl.x + t * t * b.x,
                                    omt * omt * a.y + 2 * omt * t * ctrl.y + t * t * b.y});
                }
                strokes.push_back(std::move(conn));
            }
        }
        if (first_set) {
            prev_end = strokes.back().back();
            // The connector, when added, ends at the glyph start; track the
            // glyph's own last stroke end instead.
            for (auto it = strokes.rbegin(); it != strokes.rend(); ++it)
                if (!it->empty()) {
                    prev_end = it->back();
                    break;
                }
            have_prev_end = true;
        } else {
            have_prev_end = false;
        }
        cursor += glyph->advance * size_px * style.letter_spacing_scale;
        advances.push_back(cursor);
    }

    double min_x = 1e30, min_y = 1e30, max_x = -1e30, max_y = -1e30;
    for (const StrokeF& s : strokes)
        for (const PointF& p : s) {
            min_x = std::min(min_x, p.x);
            min_y = std::min(min_y, p.y);
            max_x = std::max(max_x, p.x);
            max_y = std::max(max_y, p.y);
        }
    if (strokes.empty()) {
        min_x = min_y = 0.0;
        max_x = cursor;
        max_y = size_px;
    }
    const double margin = style.stroke_width_px + 2.0;
    st.width = std::max(1, static_cast<int>(std::ceil(max_x - min_x + 2 * margin)));
    st.height = std::max(1, static_cast<int>(std::ceil(max_y - min_y + 2 * margin)));
    st.alpha.assign(static_cast<std::size_t>(st.width) * st.height, 0);

    const double radius = style.stroke_width_px / 2.0;
    for (StrokeF& s : strokes) {
        for (PointF& p : s) {
            p.x += margin - min_x;
            p.y += margin - min_y;
        }
        rasterize_stroke(st, s, radius);
    }
    st.advances = std::move(advances);
    return st;
}

ArtifactBox overlay_handwriting(RasterImage& img, const HandwritingStencil& stencil,
                                std::optional<std::pair<int, int>> pos_px, Rgb ink_color,
                                std::uint64_t seed, double opacity, const std::string& text) {
    if (stencil.width > img.width || stencil.height > img.height)
        throw std::runtime_error("overlay_handwriting: stencil larger than page");
    int x0, y0;
    if (pos_px) {
        x0 = pos_px->first;
        y0 = pos_px->second;
        if (x0 < 0 || y0 < 0 || x0 + stencil.width > img.width || y0 + stencil.height > img.height)
            throw std::runtime_error("overlay_handwriting: stencil does not fit page at position");
    } else {
        Rng rng(seed);
        x0 = static_cast<int>(rng.next_int(0, img.width - stencil.width));
        y0 = static_cast<int>(rng.next_int(0, img.height - stencil.height));
    }
    for (int y = 0; y < stencil.height; ++y)
        for (int x = 0; x < stencil.width; ++x) {
            const double a =
                stencil.alpha[static_cast<std::size_t>(y) * stencil.width + x] / 255.0 * opacity;
            if (a <= 0.0) continue;
            const Rgb c = img.get(x0 + x, y0 + y);
            auto mixc = [&](std::uint8_t base, std::uint8_t ink) {
                return static_cast<std::uint8_t>(std::lround((1.0 - a) * base + a * ink));
            };
            img.set(x0 + x, y0 + y, {mixc(c.r, ink_color.r), mixc(c.g, ink_color.g), mixc(c.b, ink_color.b)});
        }
    return {ArtifactBox::Kind::handwritten, x0, y0, x0 + stencil.width, y0 + stencil.height, text};
}

} // namespace ecggen
