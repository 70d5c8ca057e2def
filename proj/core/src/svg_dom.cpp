#include "svgchart/svg_dom.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "svgchart/path_data.hpp"
#include "svgchart/xml.hpp"

namespace svgchart::svg {

namespace {

std::string_view local_name(std::string_view tag) {
    size_t colon = tag.rfind(':');
    return colon == std::string_view::npos ? tag : tag.substr(colon + 1);
}

ElementKind kind_of(std::string_view local, bool is_root) {
    if (local == "svg") return is_root ? ElementKind::Svg : ElementKind::Group;
    if (local == "g") return ElementKind::Group;
    if (local == "circle") return ElementKind::Circle;
    if (local == "rect") return ElementKind::Rect;
    if (local == "line") return ElementKind::Line;
    if (local == "path") return ElementKind::Path;
    if (local == "text") return ElementKind::Text;
    return ElementKind::Other;
}

std::optional<double> parse_number(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;
    std::string buf(text);
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// width/height attribute: plain number or px-suffixed; percent falls through.
std::optional<double> parse_viewport_length(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.ends_with("%")) return std::nullopt;
    if (text.ends_with("px")) text.remove_suffix(2);
    auto v = parse_number(text);
    if (v && *v > 0) return v;
    return std::nullopt;
}

ElementNode build_tree(const xml::Node& node, bool is_root, std::string& stylesheet) {
    ElementNode out;
    out.tag = std::string(local_name(node.tag));
    out.kind = kind_of(out.tag, is_root);
    out.attributes = node.attributes;
    out.text_content = node.text;
    if (out.tag == "style") stylesheet += node.text;
    out.children.reserve(node.children.size());
    for (const auto& child : node.children)
        out.children.push_back(build_tree(child, false, stylesheet));
    return out;
}

bool is_drawable(ElementKind kind) {
    switch (kind) {
        case ElementKind::Circle:
        case ElementKind::Rect:
        case ElementKind::Line:
        case ElementKind::Path:
        case ElementKind::Text:
            return true;
        default:
            return false;
    }
}

struct Flattener {
    std::vector<RawElement> out;
    std::vector<StyleContext> chain;
    int warnings = 0;

    void visit(const ElementNode& node, const AffineTransform& parent) {
        if (node.tag == "defs") return;

        AffineTransform acc = parent;
        if (const std::string* t = node.attr("transform")) {
            if (auto own = parse_transform(*t))
                acc = parent.compose(*own);
            else
                ++warnings;
        }

        if (is_drawable(node.kind)) {
            RawElement raw;
            raw.kind = node.kind;
            raw.attributes = node.attributes;
            raw.transform = acc;
            raw.ancestors = chain;
            if (const std::string* cls = node.attr("class"))
                raw.class_names = split_classes(*cls);
            out.push_back(std::move(raw));
        }

        if (node.children.empty()) return;
        chain.push_back(StyleContext{node.tag, node.attributes});
        for (const auto& child : node.children) visit(child, acc);
        chain.pop_back();
    }
};

void collect_bbox_points(const RawElement& el, std::vector<std::pair<double, double>>& pts) {
    auto push = [&](double x, double y) { pts.push_back(el.transform.apply(x, y)); };
    switch (el.kind) {
        case ElementKind::Circle: {
            double cx = el.num_attr("cx", 0), cy = el.num_attr("cy", 0), r = el.num_attr("r", 0);
            push(cx - r, cy - r);
            push(cx + r, cy + r);
            break;
        }
        case ElementKind::Rect: {
            double x = el.num_attr("x", 0), y = el.num_attr("y", 0);
            double w = el.num_attr("width", 0), h = el.num_attr("height", 0);
            push(x, y);
            push(x + w, y + h);
            break;
        }
        case ElementKind::Line:
            push(el.num_attr("x1", 0), el.num_attr("y1", 0));
            push(el.num_attr("x2", 0), el.num_attr("y2", 0));
            break;
        case ElementKind::Path: {
            const std::string* d = el.attr("d");
            if (!d) break;
            try {
                auto program = path::parse_path(*d);
                double cx = 0, cy = 0, sx = 0, sy = 0;
                for (const auto& cmd : program.commands) {
                    const auto& a = cmd.args;
                    switch (cmd.op) {
                        case 'M': cx = a[0]; cy = a[1]; sx = cx; sy = cy; break;
                        case 'm': cx += a[0]; cy += a[1]; sx = cx; sy = cy; break;
                        case 'L': case 'T': cx = a[0]; cy = a[1]; break;
                        case 'l': case 't': cx += a[0]; cy += a[1]; break;
                        case 'H': cx = a[0]; break;
                        case 'h': cx += a[0]; break;
                        case 'V': cy = a[0]; break;
                        case 'v': cy += a[0]; break;
                        case 'C': cx = a[4]; cy = a[5]; break;
                        case 'c': cx += a[4]; cy += a[5]; break;
                        case 'S': case 'Q': cx = a[2]; cy = a[3]; break;
                        case 's': case 'q': cx += a[2]; cy += a[3]; break;
                        case 'A': cx = a[5]; cy = a[6]; break;
                        case 'a': cx += a[5]; cy += a[6]; break;
                        case 'Z': case 'z': cx = sx; cy = sy; break;
                        default: break;
                    }
                    push(cx, cy);
                }
            } catch (const path::EmptyPath&) {
            }
            break;
        }
        case ElementKind::Text:
            push(el.num_attr("x", 0), el.num_attr("y", 0));
            break;
        default:
            break;
    }
}

}  // namespace

const std::string* ElementNode::attr(std::string_view name) const {
    for (const auto& [k, v] : attributes)
        if (k == name) return &v;
    return nullptr;
}

const std::string* StyleContext::attr(std::string_view name) const {
    for (const auto& [k, v] : attributes)
        if (k == name) return &v;
    return nullptr;
}

const std::string* RawElement::attr(std::string_view name) const {
    for (const auto& [k, v] : attributes)
        if (k == name) return &v;
    return nullptr;
}

double RawElement::num_attr(std::string_view name, double fallback) const {
    const std::string* raw = attr(name);
    if (!raw) return fallback;
    std::string_view text = *raw;
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.ends_with("px")) text.remove_suffix(2);
    auto v = parse_number(text);
    return v ? *v : fallback;
}

AffineTransform AffineTransform::compose(const AffineTransform& r) const {
    AffineTransform m;
    m.a = a * r.a + c * r.b;
    m.b = b * r.a + d * r.b;
    m.c = a * r.c + c * r.d;
    m.d = b * r.c + d * r.d;
    m.e = a * r.e + c * r.f + e;
    m.f = b * r.e + d * r.f + f;
    return m;
}

std::pair<double, double> AffineTransform::apply(double x, double y) const {
    return {a * x + c * y + e, b * x + d * y + f};
}

bool AffineTransform::near(const AffineTransform& o, double tol) const {
    return std::fabs(a - o.a) <= tol && std::fabs(b - o.b) <= tol &&
           std::fabs(c - o.c) <= tol && std::fabs(d - o.d) <= tol &&
           std::fabs(e - o.e) <= tol && std::fabs(f - o.f) <= tol;
}

std::vector<std::string> split_classes(std::string_view text) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) out.emplace_back(text.substr(start, i - start));
    }
    return out;
}

std::optional<AffineTransform> parse_transform(std::string_view text) {
    AffineTransform result;
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() &&
               (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == ','))
            ++pos;
    };
    bool any = false;
    for (;;) {
        skip_ws();
        if (pos >= text.size()) break;
        size_t start = pos;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
        std::string_view name = text.substr(start, pos - start);
        skip_ws();
        if (name.empty() || pos >= text.size() || text[pos] != '(') return std::nullopt;
        ++pos;
        size_t close = text.find(')', pos);
        if (close == std::string_view::npos) return std::nullopt;
        std::string_view body = text.substr(pos, close - pos);
        pos = close + 1;

        std::vector<double> args;
        size_t b = 0;
        while (b < body.size()) {
            while (b < body.size() &&
                   (std::isspace(static_cast<unsigned char>(body[b])) || body[b] == ','))
                ++b;
            if (b >= body.size()) break;
            size_t arg_start = b;
            while (b < body.size() &&
                   !std::isspace(static_cast<unsigned char>(body[b])) && body[b] != ',')
                ++b;
            auto v = parse_number(body.substr(arg_start, b - arg_start));
            if (!v) return std::nullopt;
            args.push_back(*v);
        }

        AffineTransform op;
        constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
        if (name == "translate" && (args.size() == 1 || args.size() == 2)) {
            op.e = args[0];
            op.f = args.size() == 2 ? args[1] : 0.0;
        } else if (name == "scale" && (args.size() == 1 || args.size() == 2)) {
            op.a = args[0];
            op.d = args.size() == 2 ? args[1] : args[0];
        } else if (name == "matrix" && args.size() == 6) {
            op = {args[0], args[1], args[2], args[3], args[4], args[5]};
        } else if (name == "rotate" && (args.size() == 1 || args.size() == 3)) {
            double rad = args[0] * kDegToRad;
            AffineTransform rot{std::cos(rad), std::sin(rad), -std::sin(rad), std::cos(rad), 0, 0};
            if (args.size() == 3) {
                AffineTransform to{1, 0, 0, 1, args[1], args[2]};
                AffineTransform back{1, 0, 0, 1, -args[1], -args[2]};
                op = to.compose(rot).compose(back);
            } else {
                op = rot;
            }
        } else if (name == "skewX" && args.size() == 1) {
            op.c = std::tan(args[0] * kDegToRad);
        } else if (name == "skewY" && args.size() == 1) {
            op.b = std::tan(args[0] * kDegToRad);
        } else {
            return std::nullopt;
        }
        result = result.compose(op);
        any = true;
    }
    if (!any) return std::nullopt;
    return result;
}

SvgDocument parse_svg(std::string_view text) {
    xml::Node root;
    try {
        root = xml::parse(text);
    } catch (const xml::ParseError& e) {
        throw MalformedXml(e.what());
    }
    if (local_name(root.tag) != "svg")
        throw NotSvg("root element is <" + root.tag + ">, not <svg>");

    SvgDocument doc;
    doc.root = build_tree(root, true, doc.stylesheet_text);
    doc.viewport = viewport_of(doc.root);
    int warnings = 0;
    flatten_elements(doc.root, &warnings);  // surfaces malformed-transform tally
    doc.transform_warnings = warnings;
    return doc;
}

Viewport viewport_of(const ElementNode& root) {
    Viewport vp;
    auto finish = [&](double w, double h) {
        vp.width = w;
        vp.height = h;
        vp.diagonal = std::hypot(w, h);
        return vp;
    };

    const std::string* w_attr = root.attr("width");
    const std::string* h_attr = root.attr("height");
    if (w_attr && h_attr) {
        auto w = parse_viewport_length(*w_attr);
        auto h = parse_viewport_length(*h_attr);
        if (w && h) return finish(*w, *h);
    }

    if (const std::string* vb = root.attr("viewBox")) {
        std::vector<double> nums;
        size_t i = 0;
        std::string_view text = *vb;
        while (i < text.size() && nums.size() < 4) {
            while (i < text.size() &&
                   (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
                ++i;
            size_t start = i;
            while (i < text.size() &&
                   !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != ',')
                ++i;
            if (i > start) {
                auto v = parse_number(text.substr(start, i - start));
                if (!v) break;
                nums.push_back(*v);
            }
        }
        if (nums.size() == 4 && nums[2] > 0 && nums[3] > 0) return finish(nums[2], nums[3]);
    }

    std::vector<RawElement> elements = flatten_elements(root, nullptr);
    std::vector<std::pair<double, double>> pts;
    for (const auto& el : elements) collect_bbox_points(el, pts);
    if (!pts.empty()) {
        double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
        double min_y = min_x, max_y = -min_x;
        for (auto [x, y] : pts) {
            min_x = std::min(min_x, x);
            max_x = std::max(max_x, x);
            min_y = std::min(min_y, y);
            max_y = std::max(max_y, y);
        }
        double w = max_x - min_x, h = max_y - min_y;
        if (w > 0 && h > 0) return finish(w, h);
    }

    return finish(1.0, 1.0);
}

std::vector<RawElement> flatten_elements(const ElementNode& root, int* warnings) {
    Flattener f;
    f.visit(root, AffineTransform{});
    if (warnings) *warnings = f.warnings;
    return std::move(f.out);
}

std::vector<RawElement> flatten_elements(const SvgDocument& doc) {
    return flatten_elements(doc.root, nullptr);
}

}  // namespace svgchart::svg
