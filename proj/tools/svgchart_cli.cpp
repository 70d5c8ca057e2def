#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "svgchart/chartgen.hpp"
#include "svgchart/corpus.hpp"
#include "svgchart/eval.hpp"
#include "svgchart/features.hpp"
#include "svgchart/svg_dom.hpp"
#include "svgchart/tree.hpp"

namespace fs = std::filesystem;
using namespace svgchart;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write(const fs::path& target, const std::string& data) {
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out) throw std::runtime_error("failed to write " + tmp.string());
    }
    fs::rename(tmp, target);
}

// Feature rows for every stored, non-excluded SVG in a corpus directory.
std::vector<features::MatrixRow> corpus_rows(const fs::path& corpus_dir) {
    if (!fs::is_directory(corpus_dir)) throw InputError("not a directory: " + corpus_dir.string());
    corpus::CorpusStore store(corpus_dir);
    std::vector<features::MatrixRow> rows;
    for (const corpus::CorpusEntry& entry : store.entries()) {
        if (!entry.excluded.empty()) continue;
        std::string bytes = read_file(corpus_dir / entry.svg_path);
        features::MatrixRow row;
        row.id = entry.id;
        row.label = entry.label;
        try {
            row.vector = features::extract_features(svg::parse_svg(bytes));
        } catch (const std::exception& e) {
            std::cerr << "skip " << entry.id << ": " << e.what() << "\n";
            continue;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<features::MatrixRow> rows_from_path(const fs::path& path) {
    if (fs::is_directory(path)) return corpus_rows(path);
    return features::decode_feature_matrix(read_file(path));
}

std::vector<tree::LabeledSample> labeled_samples(const std::vector<features::MatrixRow>& rows) {
    std::vector<tree::LabeledSample> samples;
    for (const auto& row : rows) {
        if (row.label.empty()) continue;
        samples.push_back({row.vector.values, row.label});
    }
    if (samples.empty()) throw InputError("no labeled samples");
    return samples;
}

int cmd_crawl(const std::string& seeds_file, const std::string& out_dir,
              const corpus::CrawlPolicy& policy) {
    std::ifstream in(seeds_file);
    if (!in) throw InputError("cannot open seeds file " + seeds_file);
    std::vector<std::string> seeds;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') seeds.push_back(line);
    }
    if (seeds.empty()) throw InputError("no seed URLs in " + seeds_file);

    corpus::CorpusStore store(out_dir);
    auto added = corpus::crawl(seeds, policy, store);
    std::cerr << "crawl: " << added.size() << " new documents\n";
    for (const auto& entry : added) std::cout << entry.id << "\t" << entry.source_url << "\n";
    return 0;
}

int cmd_ingest(const std::string& svg_dir, const std::string& labels_file,
               const std::string& out_dir) {
    corpus::CorpusStore store(out_dir);
    std::optional<fs::path> labels;
    if (!labels_file.empty()) labels = labels_file;
    auto added = corpus::ingest(svg_dir, labels, store);
    std::cerr << "ingest: " << added.size() << " new documents\n";
    for (const auto& entry : added) std::cout << entry.id << "\t" << entry.label << "\n";
    return 0;
}

int cmd_features(const std::string& corpus_dir, const std::string& out_file) {
    auto rows = corpus_rows(corpus_dir);
    atomic_write(out_file, features::encode_feature_matrix(rows));
    std::cerr << "features: " << rows.size() << " rows -> " << out_file << "\n";
    return 0;
}

int cmd_train(const std::string& matrix_file, const std::string& out_file, int max_depth) {
    if (!fs::exists(matrix_file)) throw InputError("no such file: " + matrix_file);
    auto samples = labeled_samples(rows_from_path(matrix_file));
    tree::TrainParams params;
    if (max_depth > 0) params.max_depth = max_depth;
    tree::TreeModel model = tree::fit_tree(samples, params);
    model.manifest_version = features::feature_manifest().version;
    atomic_write(out_file, tree::encode_model(model));
    std::cerr << "train: " << samples.size() << " samples, " << model.nodes.size()
              << " nodes -> " << out_file << "\n";
    return 0;
}

int cmd_predict(const std::string& model_file, const std::vector<std::string>& svg_files) {
    if (!fs::exists(model_file)) throw InputError("no such file: " + model_file);
    tree::TreeModel model = tree::decode_model(read_file(model_file));
    for (const std::string& file : svg_files) {
        features::FeatureVector vec = features::extract_features(svg::parse_svg(read_file(file)));
        auto [label, confidence] = tree::predict(model, vec.values);
        char conf[32];
        std::snprintf(conf, sizeof(conf), "%.3f", confidence);
        std::cout << label << "\t" << conf << "\t" << file << "\n";
    }
    return 0;
}

int cmd_crossval(const std::string& input, int folds, int runs, uint64_t seed, int max_depth) {
    if (!fs::exists(input)) throw InputError("no such path: " + input);
    auto samples = labeled_samples(rows_from_path(input));
    tree::TrainParams params;
    if (max_depth > 0) params.max_depth = max_depth;
    eval::EvalReport report = eval::cross_validate(samples, folds, runs, seed, params);
    std::cout << eval::encode_report(report);
    std::cerr << eval::format_report_table(report);
    return 0;
}

int cmd_stats(const std::string& corpus_dir, long total_override) {
    if (!fs::is_directory(corpus_dir)) throw InputError("not a directory: " + corpus_dir);
    corpus::CorpusStore store(corpus_dir);
    std::map<std::string, long> counts;
    for (const auto& entry : store.entries())
        if (!entry.label.empty() && entry.excluded.empty()) ++counts[entry.label];
    if (counts.empty()) throw InputError("no labeled entries in " + corpus_dir);
    std::optional<long> total;
    if (total_override > 0) total = total_override;
    std::cout << eval::format_usage_table(eval::usage_stats(counts, total));
    return 0;
}

int cmd_generate(const std::string& type_arg, int count, uint64_t seed, int n_points,
                 const std::string& out_dir) {
    std::vector<chartgen::ChartType> types;
    if (type_arg == "all") {
        types.assign(chartgen::kAllChartTypes.begin(), chartgen::kAllChartTypes.end());
    } else {
        std::stringstream ss(type_arg);
        std::string name;
        while (std::getline(ss, name, ',')) {
            auto type = chartgen::chart_type_from_name(name);
            if (!type) throw InputError("unknown chart type: " + name);
            types.push_back(*type);
        }
    }
    if (types.empty()) throw InputError("no chart types requested");
    if (count < 1) throw InputError("--count must be >= 1");

    fs::create_directories(out_dir);
    std::string labels;
    for (chartgen::ChartType type : types) {
        for (int i = 0; i < count; ++i) {
            chartgen::ChartSpec spec;
            spec.chart_type = type;
            spec.seed = seed + static_cast<uint64_t>(i);
            spec.n_points = n_points;
            std::string name = std::string(chartgen::chart_type_name(type)) + "_" +
                               std::to_string(spec.seed) + ".svg";
            atomic_write(fs::path(out_dir) / name, chartgen::generate_chart(spec));
            labels += name + "\t" + chartgen::chart_type_name(type) + "\n";
        }
    }
    atomic_write(fs::path(out_dir) / "labels.tsv", labels);
    std::cerr << "generate: " << types.size() * static_cast<size_t>(count) << " charts -> "
              << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SVG chart corpus and classification toolkit"};
    app.require_subcommand(1);

    std::string seeds_file, out_path, labels_file, svg_dir, matrix_file, model_file, input;
    std::string type_arg = "all";
    std::vector<std::string> svg_files;
    int folds = 5, runs = 10, max_depth = 0, count = 1, n_points = 10;
    long total_override = 0;
    uint64_t seed = 0;

    corpus::CrawlPolicy policy;
    if (const char* ua = std::getenv("SVGCHART_USER_AGENT")) policy.user_agent = ua;

    auto* crawl = app.add_subcommand("crawl", "Crawl seed URLs and store inline SVGs");
    crawl->add_option("--seeds", seeds_file, "File with one seed URL per line")->required();
    crawl->add_option("--out", out_path, "Corpus directory")->required();
    crawl->add_option("--max-pages", policy.max_pages);
    crawl->add_option("--max-depth", policy.max_depth);
    crawl->add_option("--delay", policy.per_host_delay, "Per-host delay in seconds");
    crawl->add_option("--jobs", policy.jobs);
    crawl->add_option("--timeout", policy.timeout);
    crawl->add_option("--user-agent", policy.user_agent);
    crawl->add_flag("--no-robots", [&](int64_t) { policy.obey_robots = false; });
    crawl->add_flag("--any-host", [&](int64_t) { policy.same_host_only = false; });

    auto* ingest = app.add_subcommand("ingest", "Ingest local SVG files into a corpus");
    ingest->add_option("dir", svg_dir, "Directory of .svg files")->required();
    ingest->add_option("--labels", labels_file, "TSV: filename<TAB>label");
    ingest->add_option("--out", out_path, "Corpus directory")->required();

    auto* feat = app.add_subcommand("features", "Extract a feature matrix from a corpus");
    feat->add_option("corpus", input, "Corpus directory")->required();
    feat->add_option("--out", out_path, "Feature matrix file")->required();

    auto* train = app.add_subcommand("train", "Train a decision tree");
    train->add_option("matrix", matrix_file, "Feature matrix file or corpus directory")
        ->required();
    train->add_option("--out", out_path, "Model file")->required();
    train->add_option("--max-depth", max_depth);

    auto* predict = app.add_subcommand("predict", "Classify SVG files with a model");
    predict->add_option("model", model_file, "Model file")->required();
    predict->add_option("files", svg_files, "SVG files")->required();

    auto* crossval = app.add_subcommand("crossval", "Stratified cross-validation");
    crossval->add_option("input", input, "Corpus directory or feature matrix file")->required();
    crossval->add_option("--folds", folds);
    crossval->add_option("--runs", runs);
    crossval->add_option("--seed", seed);
    crossval->add_option("--max-depth", max_depth);

    auto* stats = app.add_subcommand("stats", "Chart-type usage table for a labeled corpus");
    stats->add_option("corpus", input, "Corpus directory")->required();
    stats->add_option("--total", total_override, "Stated collection size overriding the sum");

    auto* generate = app.add_subcommand("generate", "Generate synthetic charts");
    generate->add_option("--type", type_arg, "Chart type, comma list, or 'all'");
    generate->add_option("--count", count, "Charts per type")->required();
    generate->add_option("--seed", seed);
    generate->add_option("--points", n_points, "Data points per chart");
    generate->add_option("--out", out_path, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (crawl->parsed()) return cmd_crawl(seeds_file, out_path, policy);
        if (ingest->parsed()) return cmd_ingest(svg_dir, labels_file, out_path);
        if (feat->parsed()) return cmd_features(input, out_path);
        if (train->parsed()) return cmd_train(matrix_file, out_path, max_depth);
        if (predict->parsed()) return cmd_predict(model_file, svg_files);
        if (crossval->parsed()) return cmd_crossval(input, folds, runs, seed, max_depth);
        if (stats->parsed()) return cmd_stats(input, total_override);
        if (generate->parsed()) return cmd_generate(type_arg, count, seed, n_points, out_path);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
