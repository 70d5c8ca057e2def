#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace svgchart::chartgen {

struct BadSpec : std::runtime_error {
    explicit BadSpec(const std::string& what) : std::runtime_error(what) {}
};

enum class ChartType { Bar, Line, Scatter, Pie, Donut, Bubble, Heatmap, Area };

inline constexpr std::array<ChartType, 8> kAllChartTypes = {
    ChartType::Bar,    ChartType::Line,   ChartType::Scatter, ChartType::Pie,
    ChartType::Donut,  ChartType::Bubble, ChartType::Heatmap, ChartType::Area};

const char* chart_type_name(ChartType type);
std::optional<ChartType> chart_type_from_name(std::string_view name);

struct ChartSpec {
    ChartType chart_type = ChartType::Bar;
    uint64_t seed = 0;
    int n_points = 10;
    double width = 640;
    double height = 480;
    int palette_size = 6;
};

// Deterministic: the same spec always yields byte-identical SVG text.
std::string generate_chart(const ChartSpec& spec);

}  // namespace svgchart::chartgen
