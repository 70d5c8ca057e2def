#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svgchart/path_data.hpp"
#include "svgchart/style.hpp"
#include "svgchart/svg_dom.hpp"

namespace svgchart::features {

// Fixed-order feature catalogue. The order and IDs are frozen per manifest
// version; FEATURES.md documents every entry.
struct FeatureManifest {
    struct Entry {
        std::string id;
        std::string group;  // "general", "style", "circle", "rect", "line", "path", "text"
        std::string description;
    };
    std::string version;
    std::vector<Entry> entries;

    int index_of(std::string_view id) const;  // -1 when absent
    size_t size() const { return entries.size(); }
};

const FeatureManifest& feature_manifest();

struct FeatureVector {
    std::vector<double> values;
    std::string manifest_version;
};

// One drawable element with absolute anchor geometry and cascaded style.
struct ElementSummary {
    svg::ElementKind kind;
    double anchor_x = 0, anchor_y = 0;  // post-transform, px

    // kind-specific, post-transform
    double radius = 0;                   // circle
    double width = 0, height = 0;        // rect
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0;  // line endpoints
    path::PathMetrics path_metrics;      // path (endpoint distance post-transform)
    bool has_path = false;

    style::ResolvedStyle style;
    std::vector<std::string> class_names;
};

std::vector<ElementSummary> summarize_elements(const svg::SvgDocument& doc);

// Axis-like lines: axis-aligned within 0.5px and at least half the matching
// viewport extent long. Returns (horizontal, vertical).
std::pair<int, int> axis_line_counts(std::span<const ElementSummary> elements,
                                     const svg::Viewport& viewport);

FeatureVector extract_features(const svg::SvgDocument& doc);

// Serializes a value the way the feature matrix does (9 significant digits).
std::string format_value(double v);

// Feature matrix file: "# manifest_version:" comment, then a CSV with an id
// column, one column per manifest entry, and a trailing label column.
struct MatrixRow {
    std::string id;
    FeatureVector vector;
    std::string label;  // empty when unlabeled
};
std::string encode_feature_matrix(std::span<const MatrixRow> rows);
std::vector<MatrixRow> decode_feature_matrix(std::string_view text);

}  // namespace svgchart::features
