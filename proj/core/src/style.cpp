#include "svgchart/style.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace svgchart::style {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_ident(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
            return false;
    }
    return true;
}

std::vector<std::pair<std::string, std::string>> parse_declarations(std::string_view body) {
    std::vector<std::pair<std::string, std::string>> out;
    size_t start = 0;
    while (start <= body.size()) {
        size_t end = body.find(';', start);
        std::string_view decl = body.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        size_t colon = decl.find(':');
        if (colon != std::string_view::npos) {
            std::string name = lower(trim(decl.substr(0, colon)));
            std::string value(trim(decl.substr(colon + 1)));
            // "!important" carries no weight in this cascade subset
            std::string lv = lower(value);
            size_t bang = lv.rfind("!important");
            if (bang != std::string::npos) value = std::string(trim(std::string_view(value).substr(0, bang)));
            if (!name.empty() && !value.empty()) out.emplace_back(std::move(name), std::move(value));
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

std::optional<int> hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return std::nullopt;
}

std::optional<Paint> parse_hex_color(std::string_view hex) {
    auto digit = [&](size_t i) { return hex_value(hex[i]); };
    auto byte2 = [&](size_t i) -> std::optional<int> {
        auto hi = digit(i), lo = digit(i + 1);
        if (!hi || !lo) return std::nullopt;
        return *hi * 16 + *lo;
    };
    if (hex.size() == 3 || hex.size() == 4) {
        int v[4] = {0, 0, 0, 15};
        for (size_t i = 0; i < hex.size(); ++i) {
            auto d = digit(i);
            if (!d) return std::nullopt;
            v[i] = *d;
        }
        return Paint::rgba(static_cast<uint8_t>(v[0] * 17), static_cast<uint8_t>(v[1] * 17),
                           static_cast<uint8_t>(v[2] * 17), static_cast<uint8_t>(v[3] * 17));
    }
    if (hex.size() == 6 || hex.size() == 8) {
        int v[4] = {0, 0, 0, 255};
        for (size_t i = 0; i * 2 < hex.size(); ++i) {
            auto b = byte2(i * 2);
            if (!b) return std::nullopt;
            v[i] = *b;
        }
        return Paint::rgba(static_cast<uint8_t>(v[0]), static_cast<uint8_t>(v[1]),
                           static_cast<uint8_t>(v[2]), static_cast<uint8_t>(v[3]));
    }
    return std::nullopt;
}

std::optional<Paint> parse_rgb_func(std::string_view body, bool has_alpha) {
    std::vector<std::string_view> parts;
    size_t start = 0;
    while (start <= body.size()) {
        size_t end = body.find(',', start);
        parts.push_back(trim(body.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start)));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    size_t expected = has_alpha ? 4 : 3;
    if (parts.size() != expected) return std::nullopt;

    auto channel = [](std::string_view p) -> std::optional<uint8_t> {
        bool pct = !p.empty() && p.back() == '%';
        if (pct) p.remove_suffix(1);
        std::string buf(trim(p));
        char* end = nullptr;
        double v = std::strtod(buf.c_str(), &end);
        if (buf.empty() || end != buf.c_str() + buf.size()) return std::nullopt;
        if (pct) v = v * 255.0 / 100.0;
        return static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    };

    auto r = channel(parts[0]), g = channel(parts[1]), b = channel(parts[2]);
    if (!r || !g || !b) return std::nullopt;
    uint8_t a = 255;
    if (has_alpha) {
        std::string_view p = parts[3];
        bool pct = !p.empty() && p.back() == '%';
        if (pct) p.remove_suffix(1);
        std::string buf(trim(p));
        char* end = nullptr;
        double v = std::strtod(buf.c_str(), &end);
        if (buf.empty() || end != buf.c_str() + buf.size()) return std::nullopt;
        if (pct) v /= 100.0;
        a = static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    }
    return Paint::rgba(*r, *g, *b, a);
}

}  // namespace

std::string Paint::key() const {
    switch (kind) {
        case Kind::None: return "none";
        case Kind::Reference: return "url:" + ref;
        case Kind::Color:
            return "rgba(" + std::to_string(color.r) + "," + std::to_string(color.g) + "," +
                   std::to_string(color.b) + "," + std::to_string(color.a) + ")";
    }
    return "none";
}

StylesheetParse parse_stylesheet(std::string_view text) {
    StylesheetParse result;

    // strip comments
    std::string clean;
    clean.reserve(text.size());
    for (size_t i = 0; i < text.size();) {
        if (text.substr(i, 2) == "/*") {
            size_t end = text.find("*/", i + 2);
            if (end == std::string_view::npos) break;
            i = end + 2;
        } else {
            clean += text[i++];
        }
    }

    size_t pos = 0;
    int next_index = 0;
    while (pos < clean.size()) {
        size_t open = clean.find('{', pos);
        if (open == std::string_view::npos) break;
        size_t close = clean.find('}', open + 1);
        if (close == std::string_view::npos) break;

        std::string_view selector_list = trim(std::string_view(clean).substr(pos, open - pos));
        auto declarations = parse_declarations(std::string_view(clean).substr(open + 1, close - open - 1));
        pos = close + 1;
        if (declarations.empty()) {
            // a rule with no usable declarations still consumes its selectors
        }

        size_t sel_start = 0;
        std::string_view sl = selector_list;
        while (sel_start <= sl.size()) {
            size_t sel_end = sl.find(',', sel_start);
            std::string_view sel = trim(sl.substr(sel_start, sel_end == std::string_view::npos ? std::string_view::npos : sel_end - sel_start));
            if (!sel.empty()) {
                StyleRule rule;
                bool supported = true;
                if (sel == "*") {
                    rule.selector = SelectorKind::Universal;
                } else if (sel[0] == '.') {
                    rule.selector = SelectorKind::Class;
                    rule.name = std::string(sel.substr(1));
                    supported = is_ident(rule.name);
                } else if (sel[0] == '#') {
                    rule.selector = SelectorKind::Id;
                    rule.name = std::string(sel.substr(1));
                    supported = is_ident(rule.name);
                } else if (is_ident(sel)) {
                    rule.selector = SelectorKind::Type;
                    rule.name = lower(sel);
                } else {
                    supported = false;  // combinators, attribute and pseudo selectors
                }
                if (supported) {
                    rule.declarations = declarations;
                    rule.source_index = next_index++;
                    result.rules.push_back(std::move(rule));
                } else {
                    ++result.dropped_selectors;
                }
            }
            if (sel_end == std::string_view::npos) break;
            sel_start = sel_end + 1;
        }
    }
    return result;
}

std::optional<Paint> parse_color(std::string_view text) {
    std::string value = lower(trim(text));
    if (value.empty()) return std::nullopt;
    if (value == "none") return Paint::none();
    if (value == "transparent") return Paint::rgba(0, 0, 0, 0);
    if (value[0] == '#') return parse_hex_color(std::string_view(value).substr(1));
    if (value.starts_with("rgba(") && value.back() == ')')
        return parse_rgb_func(std::string_view(value).substr(5, value.size() - 6), true);
    if (value.starts_with("rgb(") && value.back() == ')')
        return parse_rgb_func(std::string_view(value).substr(4, value.size() - 5), false);
    if (value.starts_with("url(") && value.back() == ')') {
        std::string_view ref = trim(std::string_view(value).substr(4, value.size() - 5));
        if (ref.size() >= 2 && (ref.front() == '"' || ref.front() == '\'') && ref.back() == ref.front())
            ref = trim(ref.substr(1, ref.size() - 2));
        Paint p;
        p.kind = Paint::Kind::Reference;
        p.ref = std::string(ref);
        return p;
    }
    auto it = named_colors().find(value);
    if (it != named_colors().end()) return Paint{Paint::Kind::Color, it->second, {}};
    return std::nullopt;
}

std::optional<double> parse_length(std::string_view text, double inherited_px) {
    std::string value(trim(text));
    if (value.empty()) return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || !std::isfinite(v)) return std::nullopt;
    std::string unit = lower(trim(std::string_view(value).substr(static_cast<size_t>(end - value.c_str()))));
    if (unit.empty() || unit == "px") return v;
    if (unit == "pt") return v * 4.0 / 3.0;
    if (unit == "em") return v * inherited_px;
    if (unit == "%") return v * inherited_px / 100.0;
    return v;  // unknown unit: numeric prefix verbatim
}

namespace {

struct ContextView {
    std::string tag;
    std::string id;
    std::vector<std::string> classes;
    std::vector<std::pair<std::string, std::string>> inline_decls;
    const std::vector<std::pair<std::string, std::string>>* attributes;

    const std::string* attr(std::string_view name) const {
        for (const auto& [k, v] : *attributes)
            if (k == name) return &v;
        return nullptr;
    }
};

ContextView make_context(std::string_view tag,
                         const std::vector<std::pair<std::string, std::string>>& attrs) {
    ContextView ctx;
    ctx.tag = lower(tag);
    ctx.attributes = &attrs;
    for (const auto& [k, v] : attrs) {
        if (k == "id") ctx.id = v;
        else if (k == "class") ctx.classes = svg::split_classes(v);
        else if (k == "style") ctx.inline_decls = parse_declarations(v);
    }
    return ctx;
}

bool rule_matches(const StyleRule& rule, const ContextView& ctx) {
    switch (rule.selector) {
        case SelectorKind::Universal: return true;
        case SelectorKind::Type: return rule.name == ctx.tag;
        case SelectorKind::Id: return !ctx.id.empty() && rule.name == ctx.id;
        case SelectorKind::Class:
            return std::find(ctx.classes.begin(), ctx.classes.end(), rule.name) != ctx.classes.end();
    }
    return false;
}

int specificity_rank(SelectorKind kind) {
    switch (kind) {
        case SelectorKind::Id: return 3;
        case SelectorKind::Class: return 2;
        case SelectorKind::Type: return 1;
        case SelectorKind::Universal: return 0;
    }
    return 0;
}

// Candidate values in precedence order: inline style, then the winning
// stylesheet rule, then the presentation attribute. An unparseable value
// falls through to the next level, so all candidates are returned.
std::vector<std::string> specified_values(const ContextView& ctx,
                                          std::span<const StyleRule> rules,
                                          std::string_view property) {
    std::vector<std::string> candidates;
    for (auto it = ctx.inline_decls.rbegin(); it != ctx.inline_decls.rend(); ++it)
        if (it->first == property) {
            candidates.push_back(it->second);
            break;
        }

    const StyleRule* best = nullptr;
    const std::string* best_value = nullptr;
    for (const StyleRule& rule : rules) {
        if (!rule_matches(rule, ctx)) continue;
        const std::string* value = nullptr;
        for (const auto& [k, v] : rule.declarations)
            if (k == property) value = &v;  // last declaration wins
        if (!value) continue;
        if (!best ||
            specificity_rank(rule.selector) > specificity_rank(best->selector) ||
            (specificity_rank(rule.selector) == specificity_rank(best->selector) &&
             rule.source_index > best->source_index)) {
            best = &rule;
            best_value = value;
        }
    }
    if (best_value) candidates.push_back(*best_value);

    if (const std::string* attr = ctx.attr(property)) candidates.push_back(*attr);
    return candidates;
}

}  // namespace

ResolvedStyle resolve_style(const svg::RawElement& element, std::span<const StyleRule> rules) {
    std::vector<ContextView> chain;
    chain.reserve(element.ancestors.size() + 1);
    for (const auto& ancestor : element.ancestors)
        chain.push_back(make_context(ancestor.tag, ancestor.attributes));
    const char* self_tag = "";
    switch (element.kind) {
        case svg::ElementKind::Circle: self_tag = "circle"; break;
        case svg::ElementKind::Rect: self_tag = "rect"; break;
        case svg::ElementKind::Line: self_tag = "line"; break;
        case svg::ElementKind::Path: self_tag = "path"; break;
        case svg::ElementKind::Text: self_tag = "text"; break;
        default: self_tag = ""; break;
    }
    chain.push_back(make_context(self_tag, element.attributes));

    ResolvedStyle rs;
    for (const ContextView& ctx : chain) {
        const ResolvedStyle inherited = rs;

        auto resolve_paint = [&](std::string_view property, const Paint& current) -> Paint {
            for (const std::string& value : specified_values(ctx, rules, property)) {
                if (lower(value) == "currentcolor") return inherited.fill;
                if (auto paint = parse_color(value)) return *paint;
            }
            return current;  // nothing parseable at any level: keep inherited
        };
        rs.fill = resolve_paint("fill", rs.fill);
        rs.stroke = resolve_paint("stroke", rs.stroke);

        for (const std::string& value : specified_values(ctx, rules, "stroke-width")) {
            if (auto px = parse_length(value, inherited.font_size); px && *px >= 0) {
                rs.stroke_width = *px;
                break;
            }
        }
        for (const std::string& value : specified_values(ctx, rules, "font-size")) {
            if (auto px = parse_length(value, inherited.font_size); px && *px > 0) {
                rs.font_size = *px;
                break;
            }
        }
    }
    rs.class_names = element.class_names;
    return rs;
}

}  // namespace svgchart::style
