#pragma once

#include <utility>
#include <vector>

namespace ecggen {

/// Polyline skeleton of one handwriting glyph in normalized coordinates:
/// y = 0 ascender top, y = 1 baseline, descenders below 1; x in [0, advance].
struct GlyphStrokes {
    std::vector<std::vector<std::pair<float, float>>> strokes;
    float advance = 0.7f;
};

/// Template for the character (letters are case-folded); nullptr when the
/// character has no template.
const GlyphStrokes* lookup_glyph(char c);

/// Fallback form for unsupported characters.
const GlyphStrokes& squiggle_glyph();

} // namespace ecggen
