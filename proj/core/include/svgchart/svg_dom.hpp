#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace svgchart::svg {

struct MalformedXml : std::runtime_error {
    explicit MalformedXml(const std::string& what) : std::runtime_error(what) {}
};
struct NotSvg : std::runtime_error {
    explicit NotSvg(const std::string& what) : std::runtime_error(what) {}
};

enum class ElementKind { Svg, Group, Circle, Rect, Line, Path, Text, Other };

struct ElementNode {
    ElementKind kind = ElementKind::Other;
    std::string tag;  // original local tag name, preserved for Other as well
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<ElementNode> children;
    std::string text_content;

    const std::string* attr(std::string_view name) const;
};

struct Viewport {
    double width = 1.0;
    double height = 1.0;
    double diagonal = 0.0;  // sqrt(width^2 + height^2)
};

// Row-major 2x3 affine: x' = a*x + c*y + e, y' = b*x + d*y + f.
struct AffineTransform {
    double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

    // this ∘ rhs: applies rhs first, then this.
    AffineTransform compose(const AffineTransform& rhs) const;
    std::pair<double, double> apply(double x, double y) const;
    bool near(const AffineTransform& o, double tol = 1e-9) const;
};

// Attribute view of one ancestor (or the element itself) for style cascading.
struct StyleContext {
    std::string tag;
    std::vector<std::pair<std::string, std::string>> attributes;

    const std::string* attr(std::string_view name) const;
};

struct RawElement {
    ElementKind kind = ElementKind::Other;
    std::vector<std::pair<std::string, std::string>> attributes;
    AffineTransform transform;                 // accumulated, root to self
    std::vector<StyleContext> ancestors;       // outermost first, excludes self
    std::vector<std::string> class_names;      // from the element's class attribute

    const std::string* attr(std::string_view name) const;
    double num_attr(std::string_view name, double fallback) const;
};

struct SvgDocument {
    ElementNode root;
    Viewport viewport;
    std::string stylesheet_text;   // all embedded <style> blocks, document order
    int transform_warnings = 0;    // malformed transform attributes seen
};

// Parses SVG text. Throws MalformedXml or NotSvg.
SvgDocument parse_svg(std::string_view text);

// Resolution order: numeric width/height attributes, then viewBox, then the
// union bounding box of drawable content, then a 1x1 sentinel. Total.
Viewport viewport_of(const ElementNode& root);

// Depth-first drawables with accumulated transforms and ancestor chains.
// `defs` subtrees are skipped; `use` is not expanded. Malformed transforms
// count into `warnings` (may be null) and act as identity.
std::vector<RawElement> flatten_elements(const SvgDocument& doc);
std::vector<RawElement> flatten_elements(const ElementNode& root, int* warnings);

// Parses an SVG transform list (translate/scale/matrix/rotate/skewX/skewY).
// Returns nullopt on malformed input.
std::optional<AffineTransform> parse_transform(std::string_view text);

// Splits a class attribute value on whitespace.
std::vector<std::string> split_classes(std::string_view text);

}  // namespace svgchart::svg
