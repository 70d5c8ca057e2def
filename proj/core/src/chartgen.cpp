#include "svgchart/chartgen.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

namespace svgchart::chartgen {

namespace {

constexpr double kPi = 3.14159265358979323846;

const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939", "#8c6d31", "#843c39",
    "#7b4173", "#3182bd", "#e6550d", "#31a354", "#756bb1", "#636363",
};
constexpr int kPaletteTotal = 20;

struct Gen {
    std::mt19937_64 rng;
    std::string out;
    int palette_offset = 0;
    int palette_size = 6;

    double uniform() { return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0); }
    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int pick(int n) { return static_cast<int>(rng() % static_cast<uint64_t>(n)); }

    const char* color(int i) const {
        return kPalette[(palette_offset + i % palette_size) % kPaletteTotal];
    }

    static std::string num(double v) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return buf;
    }

    void raw(std::string_view s) { out += s; }
    void tag(std::string_view name, std::initializer_list<std::pair<const char*, std::string>> attrs) {
        out += "<";
        out += name;
        for (const auto& [k, v] : attrs) {
            out += " ";
            out += k;
            out += "=\"";
            out += v;
            out += "\"";
        }
        out += "/>\n";
    }
};

struct Frame {
    double left, right, top, bottom;  // plot box in px
    double plot_w() const { return right - left; }
    double plot_h() const { return bottom - top; }
};

Frame make_frame(Gen& g, double w, double h) {
    Frame f;
    f.left = w * g.range(0.06, 0.12);
    f.right = w - w * g.range(0.03, 0.08);
    f.top = h * g.range(0.04, 0.10);
    f.bottom = h - h * g.range(0.06, 0.12);
    return f;
}

void emit_axes(Gen& g, const Frame& f) {
    g.tag("line", {{"x1", Gen::num(f.left)},
                   {"y1", Gen::num(f.bottom)},
                   {"x2", Gen::num(f.right)},
                   {"y2", Gen::num(f.bottom)},
                   {"stroke", "#222222"},
                   {"class", "axis"}});
    g.tag("line", {{"x1", Gen::num(f.left)},
                   {"y1", Gen::num(f.top)},
                   {"x2", Gen::num(f.left)},
                   {"y2", Gen::num(f.bottom)},
                   {"stroke", "#222222"},
                   {"class", "axis"}});
}

void gen_bar(Gen& g, const ChartSpec& spec, const Frame& f) {
    int n = spec.n_points;
    double slot = f.plot_w() / n;
    std::string bar_width = Gen::num(slot * 0.7);  // one shared string: identical widths
    std::string baseline = Gen::num(f.bottom);
    for (int i = 0; i < n; ++i) {
        double value = g.range(0.1, 0.95) * f.plot_h();
        double x = f.left + slot * i + slot * 0.15;
        g.tag("rect", {{"x", Gen::num(x)},
                       {"y", Gen::num(f.bottom - value)},
                       {"width", bar_width},
                       {"height", Gen::num(value)},
                       {"fill", g.color(0)},
                       {"class", "bar mark"}});
    }
    emit_axes(g, f);
    (void)baseline;
}

void gen_line(Gen& g, const ChartSpec& spec, const Frame& f) {
    int n = spec.n_points;
    std::string d = "M";
    for (int i = 0; i < n; ++i) {
        double x = f.left + f.plot_w() * i / std::max(1, n - 1);
        double y = f.top + g.range(0.05, 0.95) * f.plot_h();
        if (i == 0)
            d += Gen::num(x) + " " + Gen::num(y);
        else
            d += " L" + Gen::num(x) + " " + Gen::num(y);
    }
    g.tag("path", {{"d", d}, {"fill", "none"}, {"stroke", g.color(1)},
                   {"stroke-width", "2"}, {"class", "series mark"}});
    emit_axes(g, f);
}

void gen_scatter(Gen& g, const ChartSpec& spec, const Frame& f) {
    std::string radius = Gen::num(3.0 + g.pick(4));  // shared: identical radii
    for (int i = 0; i < spec.n_points; ++i) {
        g.tag("circle", {{"cx", Gen::num(g.range(f.left, f.right))},
                         {"cy", Gen::num(g.range(f.top, f.bottom))},
                         {"r", radius},
                         {"fill", g.color(0)},
                         {"class", "dot mark"}});
    }
    emit_axes(g, f);
}

void gen_bubble(Gen& g, const ChartSpec& spec, const Frame& f) {
    for (int i = 0; i < spec.n_points; ++i) {
        // i-dependent term keeps radii distinct, so radius variance is positive
        double r = 4.0 + 0.7 * i + g.range(0.0, 3.0);
        g.tag("circle", {{"cx", Gen::num(g.range(f.left, f.right))},
                         {"cy", Gen::num(g.range(f.top, f.bottom))},
                         {"r", Gen::num(r)},
                         {"fill", g.color(i)},
                         {"fill-opacity", "0.7"},
                         {"class", "bubble mark"}});
    }
}

std::vector<double> slice_angles(Gen& g, int n) {
    std::vector<double> weights(static_cast<size_t>(n));
    double sum = 0;
    for (double& w : weights) {
        w = g.range(0.4, 1.6);
        sum += w;
    }
    std::vector<double> angles{0.0};
    double acc = 0;
    for (double w : weights) {
        acc += w / sum * 2 * kPi;
        angles.push_back(acc);
    }
    angles.back() = 2 * kPi;
    return angles;
}

void gen_pie(Gen& g, const ChartSpec& spec, double w, double h, bool donut) {
    double cx = w / 2, cy = h / 2;
    double outer = 0.35 * std::min(w, h);
    double inner = donut ? 0.55 * outer : 0.0;
    auto angles = slice_angles(g, spec.n_points);
    for (int i = 0; i < spec.n_points; ++i) {
        double a0 = angles[static_cast<size_t>(i)] - kPi / 2;
        double a1 = angles[static_cast<size_t>(i) + 1] - kPi / 2;
        int large = (a1 - a0) > kPi ? 1 : 0;
        double ox0 = cx + outer * std::cos(a0), oy0 = cy + outer * std::sin(a0);
        double ox1 = cx + outer * std::cos(a1), oy1 = cy + outer * std::sin(a1);
        std::string d;
        if (donut) {
            double ix0 = cx + inner * std::cos(a0), iy0 = cy + inner * std::sin(a0);
            double ix1 = cx + inner * std::cos(a1), iy1 = cy + inner * std::sin(a1);
            d = "M" + Gen::num(ox0) + " " + Gen::num(oy0) +
                " A" + Gen::num(outer) + " " + Gen::num(outer) + " 0 " + std::to_string(large) +
                " 1 " + Gen::num(ox1) + " " + Gen::num(oy1) +
                " L" + Gen::num(ix1) + " " + Gen::num(iy1) +
                " A" + Gen::num(inner) + " " + Gen::num(inner) + " 0 " + std::to_string(large) +
                " 0 " + Gen::num(ix0) + " " + Gen::num(iy0) + " Z";
        } else {
            d = "M" + Gen::num(cx) + " " + Gen::num(cy) +
                " L" + Gen::num(ox0) + " " + Gen::num(oy0) +
                " A" + Gen::num(outer) + " " + Gen::num(outer) + " 0 " + std::to_string(large) +
                " 1 " + Gen::num(ox1) + " " + Gen::num(oy1) + " Z";
        }
        g.tag("path", {{"d", d}, {"fill", g.color(i)}, {"class", "slice mark"}});
    }
}

void gen_heatmap(Gen& g, const ChartSpec& spec, const Frame& f) {
    int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spec.n_points))));
    int rows = (spec.n_points + cols - 1) / cols;
    std::string cell_w = Gen::num(f.plot_w() / cols);
    std::string cell_h = Gen::num(f.plot_h() / rows);
    int emitted = 0;
    for (int r = 0; r < rows && emitted < spec.n_points; ++r) {
        for (int c = 0; c < cols && emitted < spec.n_points; ++c, ++emitted) {
            int red = 40 + g.pick(200);
            int green = 40 + g.pick(200);
            char fill[32];
            std::snprintf(fill, sizeof(fill), "rgb(%d,%d,%d)", red, green, 160);
            g.tag("rect", {{"x", Gen::num(f.left + f.plot_w() / cols * c)},
                           {"y", Gen::num(f.top + f.plot_h() / rows * r)},
                           {"width", cell_w},
                           {"height", cell_h},
                           {"fill", fill},
                           {"class", "cell mark"}});
        }
    }
}

void gen_area(Gen& g, const ChartSpec& spec, const Frame& f) {
    int n = spec.n_points;
    std::string d = "M" + Gen::num(f.left) + " " + Gen::num(f.bottom);
    for (int i = 0; i < n; ++i) {
        double x = f.left + f.plot_w() * i / std::max(1, n - 1);
        double y = f.top + g.range(0.05, 0.7) * f.plot_h();
        d += " L" + Gen::num(x) + " " + Gen::num(y);
    }
    d += " L" + Gen::num(f.right) + " " + Gen::num(f.bottom) + " Z";
    g.tag("path", {{"d", d}, {"fill", g.color(2)}, {"fill-opacity", "0.8"},
                   {"class", "area mark"}});
    emit_axes(g, f);
}

}  // namespace

const char* chart_type_name(ChartType type) {
    switch (type) {
        case ChartType::Bar: return "bar";
        case ChartType::Line: return "line";
        case ChartType::Scatter: return "scatter";
        case ChartType::Pie: return "pie";
        case ChartType::Donut: return "donut";
        case ChartType::Bubble: return "bubble";
        case ChartType::Heatmap: return "heatmap";
        case ChartType::Area: return "area";
    }
    return "bar";
}

std::optional<ChartType> chart_type_from_name(std::string_view name) {
    for (ChartType type : kAllChartTypes)
        if (name == chart_type_name(type)) return type;
    return std::nullopt;
}

std::string generate_chart(const ChartSpec& spec) {
    if (spec.n_points < 1) throw BadSpec("n_points must be >= 1");
    if (spec.width <= 0 || spec.height <= 0) throw BadSpec("non-positive dimensions");
    if (spec.palette_size < 1) throw BadSpec("palette_size must be >= 1");

    Gen g;
    g.rng.seed(spec.seed * 2654435761u + static_cast<uint64_t>(spec.chart_type) + 1);
    g.palette_size = spec.palette_size;
    g.palette_offset = g.pick(kPaletteTotal);

    g.raw("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Gen::num(spec.width) +
          "\" height=\"" + Gen::num(spec.height) + "\">\n");
    if (g.pick(2) == 0) {
        g.raw("<style>.mark { stroke: #333333; stroke-width: 0.5; } "
              ".axis { stroke-width: 1; }</style>\n");
    }

    Frame f = make_frame(g, spec.width, spec.height);
    switch (spec.chart_type) {
        case ChartType::Bar: gen_bar(g, spec, f); break;
        case ChartType::Line: gen_line(g, spec, f); break;
        case ChartType::Scatter: gen_scatter(g, spec, f); break;
        case ChartType::Pie: gen_pie(g, spec, spec.width, spec.height, false); break;
        case ChartType::Donut: gen_pie(g, spec, spec.width, spec.height, true); break;
        case ChartType::Bubble: gen_bubble(g, spec, f); break;
        case ChartType::Heatmap: gen_heatmap(g, spec, f); break;
        case ChartType::Area: gen_area(g, spec, f); break;
    }
    g.raw("</svg>\n");
    return std::move(g.out);
}

}  // namespace svgchart::chartgen
