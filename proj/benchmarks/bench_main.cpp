#include <benchmark/benchmark.h>

#include "svgchart/chartgen.hpp"
#include "svgchart/features.hpp"
#include "svgchart/path_data.hpp"
#include "svgchart/svg_dom.hpp"
#include "svgchart/tree.hpp"

using namespace svgchart;

namespace {

std::string sample_chart(chartgen::ChartType type, uint64_t seed, int n_points = 40) {
    chartgen::ChartSpec spec;
    spec.chart_type = type;
    spec.seed = seed;
    spec.n_points = n_points;
    return chartgen::generate_chart(spec);
}

void BM_ParseSvg(benchmark::State& state) {
    std::string text = sample_chart(chartgen::ChartType::Scatter, 1, 200);
    for (auto _ : state) {
        auto doc = svg::parse_svg(text);
        benchmark::DoNotOptimize(doc);
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseSvg);

void BM_ParsePath(benchmark::State& state) {
    std::string d = "M0 0";
    for (int i = 1; i <= 500; ++i)
        d += " L" + std::to_string(i) + " " + std::to_string((i * 37) % 100);
    for (auto _ : state) {
        auto program = path::parse_path(d);
        benchmark::DoNotOptimize(program);
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * d.size()));
}
BENCHMARK(BM_ParsePath);

void BM_ExtractFeatures(benchmark::State& state) {
    auto doc = svg::parse_svg(sample_chart(chartgen::ChartType::Bar, 2, 100));
    for (auto _ : state) {
        auto vec = features::extract_features(doc);
        benchmark::DoNotOptimize(vec);
    }
}
BENCHMARK(BM_ExtractFeatures);

void BM_FitTree(benchmark::State& state) {
    std::vector<tree::LabeledSample> samples;
    for (chartgen::ChartType type : chartgen::kAllChartTypes) {
        for (uint64_t seed = 0; seed < 25; ++seed) {
            auto doc = svg::parse_svg(sample_chart(type, seed));
            samples.push_back(
                {features::extract_features(doc).values, chartgen::chart_type_name(type)});
        }
    }
    for (auto _ : state) {
        auto model = tree::fit_tree(samples);
        benchmark::DoNotOptimize(model);
    }
}
BENCHMARK(BM_FitTree);

}  // namespace

BENCHMARK_MAIN();
