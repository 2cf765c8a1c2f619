#include "hand_strokes.hpp"

#include <cctype>
#include <map>

namespace ecggen {

namespace {

using Stroke = std::vector<std::pair<float, float>>;

std::map<char, GlyphStrokes> build_table() {
    std::map<char, GlyphStrokes> t;
    auto put = [&](char c, std::vector<Stroke> strokes, float advance = 0.7f) {
        t[c] = GlyphStrokes{std::move(strokes), advance};
    };

    put('a', {{{0.50f, 0.58f}, {0.25f, 0.52f}, {0.10f, 0.72f}, {0.25f, 0.95f}, {0.48f, 0.88f},
               {0.53f, 0.58f}, {0.55f, 1.00f}, {0.62f, 0.97f}}});
    put('b', {{{0.10f, 0.10f}, {0.10f, 1.00f}, {0.13f, 0.72f}, {0.35f, 0.56f}, {0.50f, 0.74f},
               {0.44f, 0.95f}, {0.14f, 1.00f}}});
    put('c', {{{0.50f, 0.62f}, {0.30f, 0.54f}, {0.12f, 0.70f}, {0.15f, 0.92f}, {0.35f, 1.00f},
               {0.52f, 0.92f}}});
    put('d', {{{0.48f, 0.68f}, {0.28f, 0.55f}, {0.12f, 0.73f}, {0.20f, 0.95f}, {0.44f, 0.93f},
               {0.50f, 0.10f}, {0.50f, 1.00f}, {0.58f, 0.96f}}});
    put('e', {{{0.12f, 0.78f}, {0.45f, 0.72f}, {0.40f, 0.55f}, {0.18f, 0.58f}, {0.10f, 0.85f},
               {0.30f, 1.00f}, {0.52f, 0.93f}}});
    put('f', {{{0.45f, 0.16f}, {0.30f, 0.10f}, {0.20f, 0.30f}, {0.20f, 1.28f}},
              {{0.05f, 0.55f}, {0.42f, 0.55f}}},
        0.6f);
    put('g', {{{0.50f, 0.60f}, {0.28f, 0.54f}, {0.12f, 0.72f}, {0.25f, 0.92f}, {0.48f, 0.85f},
               {0.52f, 0.55f}, {0.52f, 1.15f}, {0.40f, 1.32f}, {0.18f, 1.24f}}});
    put('h', {{{0.10f, 0.10f}, {0.10f, 1.00f}, {0.13f, 0.70f}, {0.35f, 0.55f}, {0.50f, 0.68f},
               {0.50f, 1.00f}}});
    put('i', {{{0.20f, 0.55f}, {0.20f, 0.97f}, {0.30f, 1.00f}}, {{0.20f, 0.35f}, {0.22f, 0.38f}}},
        0.42f);
    put('j', {{{0.35f, 0.55f}, {0.35f, 1.15f}, {0.25f, 1.32f}, {0.08f, 1.22f}},
              {{0.35f, 0.35f}, {0.37f, 0.38f}}},
        0.5f);
    put('k', {{{0.10f, 0.10f}, {0.10f, 1.00f}}, {{0.45f, 0.55f}, {0.13f, 0.80f}, {0.45f, 1.00f}}},
        0.6f);
    put('l', {{{0.20f, 0.10f}, {0.20f, 0.95f}, {0.33f, 1.00f}}}, 0.42f);
    put('m', {{{0.08f, 1.00f}, {0.08f, 0.58f}, {0.16f, 0.52f}, {0.28f, 0.62f}, {0.30f, 1.00f},
               {0.31f, 0.62f}, {0.43f, 0.52f}, {0.53f, 0.62f}, {0.56f, 1.00f}}},
        0.85f);
    put('n', {{{0.10f, 1.00f}, {0.10f, 0.55f}, {0.20f, 0.52f}, {0.42f, 0.62f}, {0.45f, 1.00f}}});
    put('o', {{{0.30f, 0.55f}, {0.12f, 0.70f}, {0.15f, 0.92f}, {0.35f, 1.00f}, {0.50f, 0.84f},
               {0.45f, 0.60f}, {0.30f, 0.55f}}});
    put('p', {{{0.10f, 0.55f}, {0.10f, 1.32f}},
              {{0.10f, 0.63f}, {0.35f, 0.54f}, {0.50f, 0.72f}, {0.40f, 0.92f}, {0.12f, 0.95f}}});
    put('q', {{{0.50f, 0.60f}, {0.28f, 0.54f}, {0.12f, 0.72f}, {0.25f, 0.92f}, {0.48f, 0.85f},
               {0.52f, 0.55f}, {0.52f, 1.30f}, {0.62f, 1.18f}}});
    put('r', {{{0.12f, 1.00f}, {0.12f, 0.55f}, {0.16f, 0.63f}, {0.32f, 0.52f}, {0.46f, 0.60f}}},
        0.55f);
    put('s', {{{0.48f, 0.60f}, {0.25f, 0.54f}, {0.14f, 0.68f}, {0.40f, 0.80f}, {0.48f, 0.92f},
               {0.30f, 1.00f}, {0.10f, 0.94f}}},
        0.6f);
    put('t', {{{0.25f, 0.20f}, {0.25f, 0.95f}, {0.40f, 1.00f}}, {{0.08f, 0.50f}, {0.45f, 0.50f}}},
        0.55f);
    put('u', {{{0.10f, 0.55f}, {0.10f, 0.88f}, {0.22f, 1.00f}, {0.42f, 0.90f}, {0.45f, 0.55f},
               {0.47f, 1.00f}, {0.55f, 0.97f}}});
    put('v', {{{0.08f, 0.55f}, {0.28f, 1.00f}, {0.48f, 0.55f}}}, 0.6f);
    put('w', {{{0.05f, 0.55f}, {0.18f, 1.00f}, {0.30f, 0.65f}, {0.42f, 1.00f}, {0.55f, 0.55f}}},
        0.8f);
    put('x', {{{0.08f, 0.55f}, {0.48f, 1.00f}}, {{0.48f, 0.55f}, {0.08f, 1.00f}}}, 0.6f);
    put('y', {{{0.10f, 0.55f}, {0.14f, 0.92f}, {0.35f, 0.95f}},
              {{0.50f, 0.55f}, {0.42f, 1.15f}, {0.30f, 1.32f}, {0.10f, 1.24f}}});
    put('z', {{{0.10f, 0.55f}, {0.45f, 0.55f}, {0.10f, 1.00f}, {0.48f, 1.00f}}}, 0.6f);

    put('0', {{{0.30f, 0.15f}, {0.10f, 0.35f}, {0.10f, 0.80f}, {0.30f, 1.00f}, {0.50f, 0.80f},
               {0.50f, 0.35f}, {0.30f, 0.15f}}});
    put('1', {{{0.15f, 0.35f}, {0.30f, 0.15f}, {0.30f, 1.00f}}}, 0.5f);
    put('2', {{{0.10f, 0.35f}, {0.25f, 0.15f}, {0.45f, 0.30f}, {0.40f, 0.55f}, {0.10f, 1.00f},
               {0.50f, 1.00f}}});
    put('3', {{{0.10f, 0.25f}, {0.30f, 0.15f}, {0.45f, 0.30f}, {0.30f, 0.55f}, {0.48f, 0.75f},
               {0.30f, 1.00f}, {0.08f, 0.90f}}});
    put('4', {{{0.40f, 1.00f}, {0.40f, 0.15f}, {0.08f, 0.70f}, {0.52f, 0.70f}}});
    put('5', {{{0.45f, 0.15f}, {0.15f, 0.15f}, {0.12f, 0.55f}, {0.35f, 0.50f}, {0.50f, 0.70f},
               {0.35f, 1.00f}, {0.10f, 0.92f}}});
    put('6', {{{0.45f, 0.20f}, {0.20f, 0.35f}, {0.10f, 0.75f}, {0.25f, 1.00f}, {0.45f, 0.85f},
               {0.35f, 0.60f}, {0.12f, 0.70f}}});
    put('7', {{{0.08f, 0.15f}, {0.50f, 0.15f}, {0.22f, 1.00f}}}, 0.6f);
    put('8', {{{0.30f, 0.55f}, {0.12f, 0.35f}, {0.30f, 0.15f}, {0.48f, 0.35f}, {0.30f, 0.55f},
               {0.10f, 0.80f}, {0.30f, 1.00f}, {0.50f, 0.80f}, {0.30f, 0.55f}}});
    put('9', {{{0.48f, 0.35f}, {0.28f, 0.15f}, {0.10f, 0.35f}, {0.28f, 0.55f}, {0.48f, 0.40f},
               {0.45f, 1.00f}}});

    put('.', {{{0.15f, 0.95f}, {0.19f, 1.00f}}}, 0.32f);
    put(',', {{{0.18f, 0.92f}, {0.12f, 1.12f}}}, 0.32f);
    put('-', {{{0.08f, 0.70f}, {0.40f, 0.70f}}}, 0.5f);
    put('/', {{{0.40f, 0.15f}, {0.10f, 1.00f}}}, 0.5f);
    put(':', {{{0.15f, 0.60f}, {0.18f, 0.64f}}, {{0.15f, 0.92f}, {0.18f, 0.96f}}}, 0.32f);
    put(' ', {}, 0.5f);
    return t;
}

const std::map<char, GlyphStrokes>& table() {
    static const std::map<char, GlyphStrokes> t = build_table();
    return t;
}

} // namespace

const GlyphStrokes* lookup_glyph(char c) {
    const char folded = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const auto it = table().find(folded);
    return it == table().end() ? nullptr : &it->second;
}

const GlyphStrokes& squiggle_glyph() {
    static const GlyphStrokes squiggle{
        {{{0.05f, 0.80f}, {0.15f, 0.58f}, {0.25f, 0.90f}, {0.35f, 0.58f}, {0.45f, 0.90f},
          {0.55f, 0.70f}}},
        0.65f};
    return squiggle;
}

} // namespace ecggen
