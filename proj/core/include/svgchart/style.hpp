#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svgchart/svg_dom.hpp"

namespace svgchart::style {

struct Rgba {
    uint8_t r = 0, g = 0, b = 0, a = 255;
    auto operator<=>(const Rgba&) const = default;
};

// fill/stroke value: none, a canonical color, or a paint-server reference
// (gradient/pattern). Each distinct reference counts as one distinct paint.
struct Paint {
    enum class Kind { None, Color, Reference };
    Kind kind = Kind::None;
    Rgba color;
    std::string ref;

    bool operator==(const Paint&) const = default;
    static Paint none() { return {}; }
    static Paint rgba(uint8_t r, uint8_t g, uint8_t b, uint8_t a = 255) {
        return {Kind::Color, Rgba{r, g, b, a}, {}};
    }
    // Stable key for uniqueness counting; none is excluded by callers.
    std::string key() const;
};

enum class SelectorKind { Universal, Type, Class, Id };

struct StyleRule {
    SelectorKind selector = SelectorKind::Universal;
    std::string name;  // tag, class or id name; empty for universal
    std::vector<std::pair<std::string, std::string>> declarations;
    int source_index = 0;
};

struct StylesheetParse {
    std::vector<StyleRule> rules;
    int dropped_selectors = 0;  // unsupported selectors (combinators, pseudo, ...)
};

struct ResolvedStyle {
    Paint fill = Paint::rgba(0, 0, 0);  // initial fill is black
    Paint stroke = Paint::none();
    double stroke_width = 1.0;
    double font_size = 16.0;
    std::vector<std::string> class_names;
};

StylesheetParse parse_stylesheet(std::string_view text);

// Canonical color parsing: #rgb/#rrggbb (plus 4/8-digit forms), rgb()/rgba(),
// the CSS named colors, none and transparent. url(#...) becomes a Reference.
// Returns nullopt for anything unparseable (caller falls through the cascade).
std::optional<Paint> parse_color(std::string_view text);

// Unitless and px pass through; pt is 4/3 px; em and % scale inherited_px;
// other units keep their numeric prefix. Nullopt for non-numeric input.
std::optional<double> parse_length(std::string_view text, double inherited_px);

// Full cascade for one element: inline style > stylesheet rules (specificity,
// then source order) > presentation attribute > inherited value > initial.
ResolvedStyle resolve_style(const svg::RawElement& element,
                            std::span<const StyleRule> rules);

const std::map<std::string, Rgba, std::less<>>& named_colors();

}  // namespace svgchart::style
