#include "svgchart/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace svgchart::features {

namespace {

constexpr const char* kManifestVersion = "1";

void add(std::vector<FeatureManifest::Entry>& e, std::string id, std::string group,
         std::string description) {
    e.push_back({std::move(id), std::move(group), std::move(description)});
}

FeatureManifest build_manifest() {
    FeatureManifest m;
    m.version = kManifestVersion;
    auto& e = m.entries;

    // general
    for (const char* kind : {"circle", "rect", "line", "path", "text"})
        add(e, std::string("general.count.") + kind, "general",
            std::string("number of ") + kind + " elements");
    add(e, "general.axis.horizontal", "general", "count of horizontal axis-like lines");
    add(e, "general.axis.vertical", "general", "count of vertical axis-like lines");

    // style
    add(e, "style.fill.unique_colors", "style", "unique canonical fill colors");
    add(e, "style.stroke.unique_colors", "style", "unique canonical stroke colors");
    add(e, "style.stroke_width.max", "style", "maximum stroke width (px)");
    add(e, "style.stroke_width.min", "style", "minimum stroke width (px)");
    add(e, "style.font_size.max", "style", "maximum font size (px)");
    add(e, "style.font_size.min", "style", "minimum font size (px)");
    add(e, "style.font_size.unique", "style", "unique font sizes");
    add(e, "style.font_size.variance", "style", "font size variance");

    // per-element: circle, rect, line, path share the positional block
    for (const char* kind : {"circle", "rect", "line", "path"}) {
        std::string k = kind;
        for (const char* axis : {"x", "y"}) {
            std::string a = axis;
            add(e, k + "." + a + ".max", k, "maximum normalized anchor " + a);
            add(e, k + "." + a + ".min", k, "minimum normalized anchor " + a);
            add(e, k + "." + a + ".mean", k, "mean normalized anchor " + a);
            add(e, k + "." + a + ".variance", k, "variance of normalized anchor " + a);
            add(e, k + "." + a + ".unique", k, "unique normalized anchor " + a + " values");
        }
        add(e, k + ".shared_position.avg", k, "average elements per distinct anchor");
        add(e, k + ".class.unique", k, "unique CSS class names");
    }

    add(e, "circle.radius.max", "circle", "maximum normalized radius");
    add(e, "circle.radius.min", "circle", "minimum normalized radius");
    add(e, "circle.radius.variance", "circle", "variance of normalized radius");
    add(e, "circle.radius.max_identical", "circle", "max circles sharing one radius");

    for (const char* dim : {"width", "height"}) {
        std::string d = dim;
        add(e, "rect." + d + ".max", "rect", "maximum normalized " + d);
        add(e, "rect." + d + ".min", "rect", "minimum normalized " + d);
        add(e, "rect." + d + ".variance", "rect", "variance of normalized " + d);
        add(e, "rect." + d + ".max_identical", "rect", "max rects sharing one " + d);
        add(e, "rect." + d + ".unique", "rect", "unique normalized " + d + " values");
    }

    add(e, "line.length.max", "line", "maximum normalized line length");
    add(e, "line.length.min", "line", "minimum normalized line length");
    add(e, "line.length.variance", "line", "variance of normalized line length");

    for (const char* stat : {"max", "min", "mean", "variance"})
        add(e, std::string("path.d_length.") + stat, "path",
            std::string(stat) + " of d attribute character count");
    for (const char* stat : {"max", "min", "mean", "variance"})
        add(e, std::string("path.endpoint_distance.") + stat, "path",
            std::string(stat) + " of normalized start-to-end distance");
    for (const char* stat : {"max", "min", "mean", "variance"})
        add(e, std::string("path.polygon.d_length.") + stat, "path",
            std::string(stat) + " of d length over polygon paths");
    add(e, "path.arc.total", "path", "total arc commands across paths");
    add(e, "path.arc.max_per_path", "path", "maximum arc commands in one path");

    add(e, "text.font_size.unique", "text", "unique font sizes among text elements");
    add(e, "text.shared_position.max", "text", "max text elements sharing one anchor");
    add(e, "text.class.unique", "text", "unique CSS class names on text elements");

    return m;
}

double vec_max(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}
double vec_min(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}
double vec_mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}
// population variance
double vec_var(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double m = vec_mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

// uniqueness is defined over values rounded to 6 decimals
double round6(double v) { return std::round(v * 1e6) / 1e6; }

double unique_count(const std::vector<double>& v) {
    std::map<double, int> groups;
    for (double x : v) ++groups[round6(x)];
    return static_cast<double>(groups.size());
}
double max_identical(const std::vector<double>& v) {
    std::map<double, int> groups;
    int best = 0;
    for (double x : v) best = std::max(best, ++groups[round6(x)]);
    return static_cast<double>(best);
}

struct AnchorGroups {
    double avg_share = 0;  // elements per distinct anchor
    double max_share = 0;
};
AnchorGroups anchor_groups(const std::vector<std::pair<double, double>>& anchors) {
    AnchorGroups g;
    if (anchors.empty()) return g;
    std::map<std::pair<double, double>, int> groups;
    int best = 0;
    for (auto [x, y] : anchors) best = std::max(best, ++groups[{round6(x), round6(y)}]);
    g.avg_share = static_cast<double>(anchors.size()) / static_cast<double>(groups.size());
    g.max_share = static_cast<double>(best);
    return g;
}

double unique_strings(const std::vector<std::string>& v) {
    std::vector<std::string> s(v);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return static_cast<double>(s.size());
}

}  // namespace

int FeatureManifest::index_of(std::string_view id) const {
    for (size_t i = 0; i < entries.size(); ++i)
        if (entries[i].id == id) return static_cast<int>(i);
    return -1;
}

const FeatureManifest& feature_manifest() {
    static const FeatureManifest manifest = build_manifest();
    return manifest;
}

std::vector<ElementSummary> summarize_elements(const svg::SvgDocument& doc) {
    const auto rules = style::parse_stylesheet(doc.stylesheet_text).rules;
    std::vector<ElementSummary> out;
    for (const svg::RawElement& raw : svg::flatten_elements(doc)) {
        ElementSummary s;
        s.kind = raw.kind;
        s.class_names = raw.class_names;
        s.style = style::resolve_style(raw, rules);
        const svg::AffineTransform& t = raw.transform;
        switch (raw.kind) {
            case svg::ElementKind::Circle: {
                auto [x, y] = t.apply(raw.num_attr("cx", 0), raw.num_attr("cy", 0));
                s.anchor_x = x;
                s.anchor_y = y;
                s.radius = raw.num_attr("r", 0) * std::sqrt(std::fabs(t.a * t.d));
                break;
            }
            case svg::ElementKind::Rect: {
                auto [x, y] = t.apply(raw.num_attr("x", 0), raw.num_attr("y", 0));
                s.anchor_x = x;
                s.anchor_y = y;
                s.width = raw.num_attr("width", 0) * std::fabs(t.a);
                s.height = raw.num_attr("height", 0) * std::fabs(t.d);
                break;
            }
            case svg::ElementKind::Line: {
                auto p1 = t.apply(raw.num_attr("x1", 0), raw.num_attr("y1", 0));
                auto p2 = t.apply(raw.num_attr("x2", 0), raw.num_attr("y2", 0));
                s.x1 = p1.first; s.y1 = p1.second;
                s.x2 = p2.first; s.y2 = p2.second;
                s.anchor_x = s.x1;
                s.anchor_y = s.y1;
                break;
            }
            case svg::ElementKind::Path: {
                const std::string* d = raw.attr("d");
                if (d) {
                    try {
                        auto program = path::parse_path(*d);
                        s.path_metrics = path::path_metrics(program);
                        auto start = t.apply(s.path_metrics.start_x, s.path_metrics.start_y);
                        auto end = t.apply(s.path_metrics.end_x, s.path_metrics.end_y);
                        s.anchor_x = start.first;
                        s.anchor_y = start.second;
                        s.path_metrics.endpoint_distance =
                            std::hypot(end.first - start.first, end.second - start.second);
                        s.has_path = true;
                    } catch (const path::EmptyPath&) {
                    }
                }
                break;
            }
            case svg::ElementKind::Text: {
                auto [x, y] = t.apply(raw.num_attr("x", 0), raw.num_attr("y", 0));
                s.anchor_x = x;
                s.anchor_y = y;
                break;
            }
            default:
                break;
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::pair<int, int> axis_line_counts(std::span<const ElementSummary> elements,
                                     const svg::Viewport& viewport) {
    int horizontal = 0, vertical = 0;
    for (const auto& el : elements) {
        if (el.kind != svg::ElementKind::Line) continue;
        double len = std::hypot(el.x2 - el.x1, el.y2 - el.y1);
        if (std::fabs(el.y1 - el.y2) <= 0.5 && len >= 0.5 * viewport.width) ++horizontal;
        if (std::fabs(el.x1 - el.x2) <= 0.5 && len >= 0.5 * viewport.height) ++vertical;
    }
    return {horizontal, vertical};
}

FeatureVector extract_features(const svg::SvgDocument& doc) {
    const FeatureManifest& manifest = feature_manifest();
    const svg::Viewport& vp = doc.viewport;
    const double size_denom = std::max(vp.width, vp.height);
    auto elements = summarize_elements(doc);

    std::unordered_map<std::string, double> f;
    auto set = [&](const std::string& id, double v) { f[id] = v; };

    std::map<svg::ElementKind, std::vector<const ElementSummary*>> by_kind;
    for (const auto& el : elements) by_kind[el.kind].push_back(&el);
    auto of_kind = [&](svg::ElementKind k) -> const std::vector<const ElementSummary*>& {
        static const std::vector<const ElementSummary*> empty;
        auto it = by_kind.find(k);
        return it == by_kind.end() ? empty : it->second;
    };

    // general
    set("general.count.circle", static_cast<double>(of_kind(svg::ElementKind::Circle).size()));
    set("general.count.rect", static_cast<double>(of_kind(svg::ElementKind::Rect).size()));
    set("general.count.line", static_cast<double>(of_kind(svg::ElementKind::Line).size()));
    set("general.count.path", static_cast<double>(of_kind(svg::ElementKind::Path).size()));
    set("general.count.text", static_cast<double>(of_kind(svg::ElementKind::Text).size()));
    auto [h_axes, v_axes] = axis_line_counts(elements, vp);
    set("general.axis.horizontal", h_axes);
    set("general.axis.vertical", v_axes);

    // style (over all drawable elements)
    {
        std::vector<std::string> fills, strokes;
        std::vector<double> stroke_widths, font_sizes;
        for (const auto& el : elements) {
            if (el.style.fill.kind != style::Paint::Kind::None) fills.push_back(el.style.fill.key());
            if (el.style.stroke.kind != style::Paint::Kind::None)
                strokes.push_back(el.style.stroke.key());
            stroke_widths.push_back(el.style.stroke_width);
            font_sizes.push_back(el.style.font_size);
        }
        set("style.fill.unique_colors", unique_strings(fills));
        set("style.stroke.unique_colors", unique_strings(strokes));
        set("style.stroke_width.max", vec_max(stroke_widths));
        set("style.stroke_width.min", vec_min(stroke_widths));
        set("style.font_size.max", vec_max(font_sizes));
        set("style.font_size.min", vec_min(font_sizes));
        set("style.font_size.unique", unique_count(font_sizes));
        set("style.font_size.variance", vec_var(font_sizes));
    }

    // positional block shared by circle/rect/line/path; unparseable paths are
    // counted above but carry no usable geometry, so they are skipped here
    struct KindSel {
        const char* name;
        svg::ElementKind kind;
    };
    for (KindSel sel : {KindSel{"circle", svg::ElementKind::Circle},
                        KindSel{"rect", svg::ElementKind::Rect},
                        KindSel{"line", svg::ElementKind::Line},
                        KindSel{"path", svg::ElementKind::Path}}) {
        std::vector<double> xs, ys;
        std::vector<std::pair<double, double>> anchors;
        std::vector<std::string> classes;
        for (const ElementSummary* el : of_kind(sel.kind)) {
            if (sel.kind == svg::ElementKind::Path && !el->has_path) continue;
            double nx = el->anchor_x / vp.width;
            double ny = el->anchor_y / vp.height;
            xs.push_back(nx);
            ys.push_back(ny);
            anchors.emplace_back(nx, ny);
            for (const auto& c : el->class_names) classes.push_back(c);
        }
        std::string k = sel.name;
        set(k + ".x.max", vec_max(xs));
        set(k + ".x.min", vec_min(xs));
        set(k + ".x.mean", vec_mean(xs));
        set(k + ".x.variance", vec_var(xs));
        set(k + ".x.unique", unique_count(xs));
        set(k + ".y.max", vec_max(ys));
        set(k + ".y.min", vec_min(ys));
        set(k + ".y.mean", vec_mean(ys));
        set(k + ".y.variance", vec_var(ys));
        set(k + ".y.unique", unique_count(ys));
        set(k + ".shared_position.avg", anchor_groups(anchors).avg_share);
        set(k + ".class.unique", unique_strings(classes));
    }

    // circle radii
    {
        std::vector<double> radii;
        for (const ElementSummary* el : of_kind(svg::ElementKind::Circle))
            radii.push_back(el->radius / size_denom);
        set("circle.radius.max", vec_max(radii));
        set("circle.radius.min", vec_min(radii));
        set("circle.radius.variance", vec_var(radii));
        set("circle.radius.max_identical", max_identical(radii));
    }

    // rect widths/heights
    {
        std::vector<double> widths, heights;
        for (const ElementSummary* el : of_kind(svg::ElementKind::Rect)) {
            widths.push_back(el->width / size_denom);
            heights.push_back(el->height / size_denom);
        }
        for (auto& [name, vals] :
             std::initializer_list<std::pair<const char*, std::vector<double>*>>{
                 {"width", &widths}, {"height", &heights}}) {
            std::string base = std::string("rect.") + name + ".";
            set(base + "max", vec_max(*vals));
            set(base + "min", vec_min(*vals));
            set(base + "variance", vec_var(*vals));
            set(base + "max_identical", max_identical(*vals));
            set(base + "unique", unique_count(*vals));
        }
    }

    // line lengths
    {
        std::vector<double> lengths;
        for (const ElementSummary* el : of_kind(svg::ElementKind::Line))
            lengths.push_back(std::hypot(el->x2 - el->x1, el->y2 - el->y1) / vp.diagonal);
        set("line.length.max", vec_max(lengths));
        set("line.length.min", vec_min(lengths));
        set("line.length.variance", vec_var(lengths));
    }

    // path statistics
    {
        std::vector<double> d_lengths, distances, polygon_d_lengths, arcs;
        double arc_total = 0;
        for (const ElementSummary* el : of_kind(svg::ElementKind::Path)) {
            if (!el->has_path) continue;
            const path::PathMetrics& pm = el->path_metrics;
            d_lengths.push_back(static_cast<double>(pm.d_length));
            distances.push_back(pm.endpoint_distance / vp.diagonal);
            if (pm.is_polygon) polygon_d_lengths.push_back(static_cast<double>(pm.d_length));
            arcs.push_back(static_cast<double>(pm.arc_calls));
            arc_total += pm.arc_calls;
        }
        set("path.d_length.max", vec_max(d_lengths));
        set("path.d_length.min", vec_min(d_lengths));
        set("path.d_length.mean", vec_mean(d_lengths));
        set("path.d_length.variance", vec_var(d_lengths));
        set("path.endpoint_distance.max", vec_max(distances));
        set("path.endpoint_distance.min", vec_min(distances));
        set("path.endpoint_distance.mean", vec_mean(distances));
        set("path.endpoint_distance.variance", vec_var(distances));
        set("path.polygon.d_length.max", vec_max(polygon_d_lengths));
        set("path.polygon.d_length.min", vec_min(polygon_d_lengths));
        set("path.polygon.d_length.mean", vec_mean(polygon_d_lengths));
        set("path.polygon.d_length.variance", vec_var(polygon_d_lengths));
        set("path.arc.total", arc_total);
        set("path.arc.max_per_path", vec_max(arcs));
    }

    // text
    {
        std::vector<double> font_sizes;
        std::vector<std::pair<double, double>> anchors;
        std::vector<std::string> classes;
        for (const ElementSummary* el : of_kind(svg::ElementKind::Text)) {
            font_sizes.push_back(el->style.font_size);
            anchors.emplace_back(el->anchor_x / vp.width, el->anchor_y / vp.height);
            for (const auto& c : el->class_names) classes.push_back(c);
        }
        set("text.font_size.unique", unique_count(font_sizes));
        set("text.shared_position.max", anchor_groups(anchors).max_share);
        set("text.class.unique", unique_strings(classes));
    }

    FeatureVector vec;
    vec.manifest_version = manifest.version;
    vec.values.reserve(manifest.size());
    for (const auto& entry : manifest.entries) {
        auto it = f.find(entry.id);
        if (it == f.end()) throw std::logic_error("feature not computed: " + entry.id);
        double v = it->second;
        if (!std::isfinite(v)) throw std::logic_error("non-finite feature: " + entry.id);
        vec.values.push_back(v);
    }
    return vec;
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string encode_feature_matrix(std::span<const MatrixRow> rows) {
    const FeatureManifest& manifest = feature_manifest();
    std::string out = "# manifest_version: " + manifest.version + "\n";
    out += "id";
    for (const auto& entry : manifest.entries) out += "," + entry.id;
    out += ",label\n";
    for (const MatrixRow& row : rows) {
        out += row.id;
        for (double v : row.vector.values) out += "," + format_value(v);
        out += "," + row.label + "\n";
    }
    return out;
}

std::vector<MatrixRow> decode_feature_matrix(std::string_view text) {
    std::vector<MatrixRow> rows;
    std::string version;
    size_t pos = 0;
    bool header_seen = false;
    size_t expected_cols = feature_manifest().size() + 2;
    while (pos < text.size()) {
        size_t end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() : end + 1;
        if (line.empty()) continue;
        if (line.starts_with("#")) {
            std::string_view rest = line.substr(1);
            size_t colon = rest.find(':');
            if (colon != std::string_view::npos && rest.substr(0, colon).find("manifest_version") != std::string_view::npos) {
                std::string_view v = rest.substr(colon + 1);
                while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
                version = std::string(v);
            }
            continue;
        }
        if (!header_seen) {
            header_seen = true;  // column header
            continue;
        }
        std::vector<std::string> cells;
        size_t cell_start = 0;
        for (;;) {
            size_t comma = line.find(',', cell_start);
            cells.emplace_back(line.substr(cell_start, comma == std::string_view::npos ? std::string_view::npos : comma - cell_start));
            if (comma == std::string_view::npos) break;
            cell_start = comma + 1;
        }
        if (cells.size() != expected_cols)
            throw std::runtime_error("feature matrix row has " + std::to_string(cells.size()) +
                                     " columns, expected " + std::to_string(expected_cols));
        MatrixRow row;
        row.id = cells.front();
        row.label = cells.back();
        row.vector.manifest_version = version.empty() ? feature_manifest().version : version;
        row.vector.values.reserve(cells.size() - 2);
        for (size_t i = 1; i + 1 < cells.size(); ++i)
            row.vector.values.push_back(std::strtod(cells[i].c_str(), nullptr));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace svgchart::features
