#include <doctest.h>

#include <cmath>

#include "ecggen/grid_renderer.hpp"
#include "ecggen/text_artifacts.hpp"

using namespace ecggen;

namespace {

double stencil_diff(const HandwritingStencil& a, const HandwritingStencil& b) {
    const int w = std::min(a.width, b.width), h = std::min(a.height, b.height);
    double diff = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            diff += std::abs(static_cast<int>(a.alpha[y * a.width + x]) -
                             static_cast<int>(b.alpha[y * b.width + x]));
    const double denom = 255.0 * w * h;
    return diff / denom;
}

} // namespace

TEST_CASE("printed fields land at their position with ink pixels") {
    PaperSpec spec;
    RasterImage img(600, 400, {255, 255, 255});
    PrintedTemplate tpl;
    tpl.fields.push_back({"name", "DOE, JOHN", 10.0, 10.0, 3.0});
    const PrintedOverlayResult res = overlay_printed_text(img, tpl, {}, spec);
    REQUIRE(res.boxes.size() == 1);
    CHECK(res.warnings.empty());
    const ArtifactBox& b = res.boxes[0];
    CHECK(b.kind == ArtifactBox::Kind::printed);
    CHECK(b.text == "DOE, JOHN");
    int ink = 0;
    for (int y = b.y0; y <= b.y1; ++y)
        for (int x = b.x0; x <= b.x1; ++x)
            if (img.get(x, y) == tpl.ink_color) ++ink;
    CHECK(ink > 50);
    // Nothing outside the reported box.
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (img.get(x, y) == tpl.ink_color) {
                CHECK(x >= b.x0);
                CHECK(x <= b.x1);
                CHECK(y >= b.y0);
                CHECK(y <= b.y1);
            }
}

TEST_CASE("collision avoidance moves a field off a trace") {
    PaperSpec spec;
    RasterImage img(600, 400, {255, 255, 255});
    Polyline trace;
    for (int x = 0; x < 600; ++x) trace.push_back({static_cast<double>(x), 80.0});
    PrintedTemplate tpl;
    tpl.allow_overlap = false;
    tpl.fields.push_back({"hr", "HR 72", 10.0, 10.0, 3.0}); // y=10mm ~ row 79 px
    const PrintedOverlayResult res = overlay_printed_text(img, tpl, {trace}, spec);
    REQUIRE(res.boxes.size() == 1);
    const ArtifactBox& b = res.boxes[0];
    const bool clear = b.y1 < 79 || b.y0 > 81;
    CHECK(clear);
}

TEST_CASE("template validation rejects out-of-page fields") {
    PaperSpec spec;
    PrintedTemplate tpl;
    tpl.fields.push_back({"x", "text", -5.0, 10.0, 3.0});
    CHECK_THROWS(tpl.validate(spec));
    tpl.fields[0] = {"x", "text", 10.0, 10.0, 0.0};
    CHECK_THROWS(tpl.validate(spec));
}

TEST_CASE("keyword selection finds lexicon phrases in a corpus") {
    const std::vector<std::string> lexicon{"sinus rhythm", "atrial fibrillation", "lbbb"};
    const std::string corpus =
        "Impression: normal SINUS rhythm, no evidence of atrial fibrillation.";
    const KeywordSelection sel = select_keywords(corpus, lexicon, 2, 99);
    CHECK_FALSE(sel.lexicon_fallback);
    REQUIRE(sel.keywords.size() == 2);
    for (const std::string& k : sel.keywords)
        CHECK((k == "sinus rhythm" || k == "atrial fibrillation"));
    CHECK(sel.keywords[0] != sel.keywords[1]);
}

TEST_CASE("keyword selection falls back to the lexicon with no matches") {
    const std::vector<std::string> lexicon{"sinus rhythm", "lbbb", "pvc"};
    const KeywordSelection sel = select_keywords("totally unrelated text", lexicon, 2, 7);
    CHECK(sel.lexicon_fallback);
    REQUIRE(sel.keywords.size() == 2);
    for (const std::string& k : sel.keywords)
        CHECK((k == "sinus rhythm" || k == "lbbb" || k == "pvc"));
}

TEST_CASE("keyword selection is deterministic in the seed") {
    const std::vector<std::string> lexicon = builtin_lexicon();
    const KeywordSelection a = select_keywords("", lexicon, 3, 42);
    const KeywordSelection b = select_keywords("", lexicon, 3, 42);
    CHECK(a.keywords == b.keywords);
}

TEST_CASE("all seven styles validate and differ beyond slant alone") {
    for (int id = 1; id <= 7; ++id) {
        const HandwritingStyle s = handwriting_style(id);
        CHECK(s.style_id == id);
        CHECK_NOTHROW(s.validate());
    }
    CHECK_THROWS(handwriting_style(0));
    CHECK_THROWS(handwriting_style(8));
}

TEST_CASE("handwriting synthesis is deterministic in the seed") {
    const HandwritingStyle style = handwriting_style(4);
    const HandwritingStencil a = synthesize_handwriting("sinus rhythm", style, 40.0, 5);
    const HandwritingStencil b = synthesize_handwriting("sinus rhythm", style, 40.0, 5);
    CHECK(a.alpha == b.alpha);
    const HandwritingStencil c = synthesize_handwriting("sinus rhythm", style, 40.0, 6);
    CHECK(stencil_diff(a, c) > 0.0);
}

TEST_CASE("zero-perturbation output does not depend on the seed") {
    HandwritingStyle plain;
    plain.jitter_px = 0.0;
    plain.baseline_wobble_px = 0.0;
    const HandwritingStencil a = synthesize_handwriting("afib", plain, 36.0, 1);
    const HandwritingStencil b = synthesize_handwriting("afib", plain, 36.0, 999);
    CHECK(a.alpha == b.alpha);
}

TEST_CASE("pen advance grows monotonically across glyphs") {
    const HandwritingStencil s =
        synthesize_handwriting("bigeminy", handwriting_style(2), 40.0, 3);
    REQUIRE(s.advances.size() == 8);
    for (std::size_t i = 1; i < s.advances.size(); ++i) CHECK(s.advances[i] > s.advances[i - 1]);
    CHECK_FALSE(s.had_unsupported);
}

TEST_CASE("unsupported characters get a squiggle, not a crash") {
    const HandwritingStencil s = synthesize_handwriting("a%b", handwriting_style(1), 36.0, 3);
    CHECK(s.had_unsupported);
    CHECK(s.width > 0);
}

TEST_CASE("styles are pairwise distinguishable") {
    std::vector<HandwritingStencil> stencils;
    for (int id = 1; id <= 7; ++id)
        stencils.push_back(synthesize_handwriting("sinus", handwriting_style(id), 40.0, 11));
    for (std::size_t i = 0; i < stencils.size(); ++i)
        for (std::size_t j = i + 1; j < stencils.size(); ++j)
            CHECK(stencil_diff(stencils[i], stencils[j]) > 0.01);
}

TEST_CASE("overlay places the stencil and reports its box") {
    RasterImage img(500, 300, {255, 255, 255});
    const HandwritingStencil s = synthesize_handwriting("pvc", handwriting_style(3), 40.0, 9);
    const ArtifactBox box =
        overlay_handwriting(img, s, std::make_pair(50, 60), {25, 25, 70}, 0, 0.9, "pvc");
    CHECK(box.kind == ArtifactBox::Kind::handwritten);
    CHECK(box.x0 == 50);
    CHECK(box.y0 == 60);
    CHECK(box.text == "pvc");
    int inked = 0;
    for (int y = box.y0; y <= box.y1; ++y)
        for (int x = box.x0; x <= box.x1; ++x)
            if (img.get(x, y) != Rgb{255, 255, 255}) ++inked;
    CHECK(inked > 20);
}

TEST_CASE("random placement stays fully on the page") {
    const HandwritingStencil s = synthesize_handwriting("afib", handwriting_style(5), 44.0, 2);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        RasterImage img(400, 200, {255, 255, 255});
        const ArtifactBox box = overlay_handwriting(img, s, std::nullopt, {0, 0, 0}, seed);
        CHECK(box.x0 >= 0);
        CHECK(box.y0 >= 0);
        CHECK(box.x1 < img.width);
        CHECK(box.y1 < img.height);
    }
}

TEST_CASE("explicit placement off the page is rejected") {
    RasterImage img(100, 60, {255, 255, 255});
    const HandwritingStencil s = synthesize_handwriting("lbbb", handwriting_style(1), 40.0, 4);
    CHECK_THROWS(overlay_handwriting(img, s, std::make_pair(90, 50), {0, 0, 0}, 0));
}
