// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when anything fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "httplib.h"
#include "svgchart/chartgen.hpp"
#include "svgchart/corpus.hpp"
#include "svgchart/eval.hpp"
#include "svgchart/features.hpp"
#include "svgchart/svg_dom.hpp"
#include "svgchart/tree.hpp"

using namespace svgchart;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << " - " << name;
    if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
}

void run(const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
    try {
        auto [ok, detail] = fn();
        report(name, ok, detail);
    } catch (const std::exception& e) {
        report(name, false, std::string("exception: ") + e.what());
    }
}

// Per-type counts of the four large public chart collections.
const std::map<std::string, long> kD3Counts = {
    {"area", 32},    {"bar", 154},     {"box", 11},      {"bubble", 70},
    {"chord", 34},   {"donut", 31},    {"heatmap", 32},  {"geographic-map", 379},
    {"graph", 60},   {"hexabin", 21},  {"line", 157},    {"radial", 13},
    {"pie", 7},      {"sankey", 11},   {"scatter", 118}, {"treemap", 10},
    {"voronoi", 25}, {"waffle", 12},   {"word-cloud", 6},{"sunburst", 28},
    {"stream-graph", 13}, {"parallel-coordinates", 23}};

const std::map<std::string, long> kFusionCounts = {
    {"area", 14}, {"bar", 224}, {"box", 22},  {"donut", 54}, {"geographic-map", 48},
    {"heatmap", 12}, {"line", 84}, {"pie", 26}, {"scatter", 29}, {"sunburst", 6}};
const long kFusionStatedTotal = 530;  // stated collection size; per-type counts sum to 519

const std::map<std::string, long> kGraphiqCounts = {
    {"bubble", 9}, {"donut", 18}, {"area", 210}, {"graph", 5}, {"geographic-map", 244},
    {"line", 655}, {"waffle", 4}, {"box", 6}, {"bar", 1542}, {"treemap", 6}, {"scatter", 28}};

const std::map<std::string, long> kPlotlyCounts = {
    {"area", 10},  {"bar", 1364}, {"box", 259},  {"contour", 118}, {"donut", 193},
    {"filled-line", 126}, {"geographic-map", 184}, {"line", 1198}, {"pie", 26},
    {"radial", 17}, {"scatter", 3049}};

double pct_of(const eval::UsageReport& r, const std::string& label) {
    for (const auto& row : r.rows)
        if (row.label == label) return row.pct;
    return 0.0;
}

bool close1(double a, double b) { return std::fabs(a - b) < 1e-9; }

std::pair<bool, std::string> criterion1() {
    std::string detail;
    auto expect = [&](bool cond, const std::string& what) {
        if (!cond) detail += (detail.empty() ? "" : "; ") + what;
        return cond;
    };
    bool ok = true;

    auto d3 = eval::usage_stats(kD3Counts);
    ok &= expect(d3.most_popular == "geographic-map" && close1(d3.most_popular_pct, 30.4),
                 "d3 most popular");
    ok &= expect(d3.second_most_popular == "line" && close1(d3.second_most_popular_pct, 12.6),
                 "d3 second");
    ok &= expect(close1(pct_of(d3, "bar"), 12.3), "d3 bar");
    ok &= expect(close1(pct_of(d3, "pie"), 0.6), "d3 pie");

    auto plotly = eval::usage_stats(kPlotlyCounts);
    ok &= expect(plotly.most_popular == "scatter" && close1(plotly.most_popular_pct, 46.6),
                 "plotly most popular");
    ok &= expect(plotly.second_most_popular == "bar" && close1(plotly.second_most_popular_pct, 20.8),
                 "plotly second");
    ok &= expect(close1(pct_of(plotly, "line"), 18.3), "plotly line");
    ok &= expect(close1(pct_of(plotly, "pie"), 0.4), "plotly pie");

    auto fusion = eval::usage_stats(kFusionCounts, kFusionStatedTotal);
    ok &= expect(fusion.most_popular == "bar" && close1(fusion.most_popular_pct, 42.3),
                 "fusion most popular");
    ok &= expect(fusion.second_most_popular == "line" && close1(fusion.second_most_popular_pct, 15.8),
                 "fusion second");
    ok &= expect(close1(pct_of(fusion, "pie"), 4.9), "fusion pie");

    auto graphiq = eval::usage_stats(kGraphiqCounts);
    ok &= expect(graphiq.most_popular == "bar" && close1(graphiq.most_popular_pct, 56.5),
                 "graphiq most popular");
    ok &= expect(graphiq.second_most_popular == "line" && close1(graphiq.second_most_popular_pct, 24.0),
                 "graphiq second");
    ok &= expect(close1(pct_of(graphiq, "pie"), 0.0), "graphiq pie");

    return {ok, detail};
}

std::pair<bool, std::string> criterion2() {
    struct Row {
        const std::map<std::string, long>* counts;
        std::optional<long> total;
        double stated;
        const char* name;
    };
    Row rows[] = {{&kD3Counts, std::nullopt, 64.8, "d3"},
                  {&kFusionCounts, kFusionStatedTotal, 72.6, "fusion"},
                  {&kPlotlyCounts, std::nullopt, 88.6, "plotly"},
                  {&kGraphiqCounts, std::nullopt, 90.5, "graphiq"}};
    std::string detail;
    bool ok = true;
    for (const Row& row : rows) {
        auto stats = eval::usage_stats(*row.counts, row.total);
        if (std::fabs(stats.top4_coverage_raw - row.stated) > 0.05) {
            ok = false;
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%s raw %.4f vs %.1f", row.name,
                          stats.top4_coverage_raw, row.stated);
            detail += std::string(detail.empty() ? "" : "; ") + buf;
        }
    }
    return {ok, detail};
}

std::vector<tree::LabeledSample> chart_corpus(int per_type, uint64_t seed_base) {
    std::vector<tree::LabeledSample> samples;
    for (chartgen::ChartType type : chartgen::kAllChartTypes) {
        for (int i = 0; i < per_type; ++i) {
            chartgen::ChartSpec spec;
            spec.chart_type = type;
            spec.seed = seed_base + static_cast<uint64_t>(i);
            spec.n_points = 8 + static_cast<int>((seed_base + i) % 17);
            auto doc = svg::parse_svg(chartgen::generate_chart(spec));
            samples.push_back(
                {features::extract_features(doc).values, chartgen::chart_type_name(type)});
        }
    }
    return samples;
}

std::pair<bool, std::string> criterion3() {
    auto samples = chart_corpus(100, 0);
    auto report = eval::cross_validate(samples, 5, 10, 0);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "mean accuracy %.4f", report.mean_accuracy);
    std::cerr << "  8-type corpus: " << buf << "\n";
    return {report.mean_accuracy >= 0.95, buf};
}

// Synthetic non-chart documents: icon-like blobs with a handful of irregular
// curvy paths, no axis lines, occasional accent circle or rect, tiny viewport.
std::string generate_non_chart(uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 1);
    auto uniform = [&] { return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0); };
    auto range = [&](double lo, double hi) { return lo + (hi - lo) * uniform(); };
    auto num = [](double v) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };
    double size = 24 + static_cast<double>(rng() % 5) * 8;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(size) +
                      "\" height=\"" + num(size) + "\">\n";
    int n_paths = 1 + static_cast<int>(rng() % 4);
    for (int p = 0; p < n_paths; ++p) {
        std::string d = "M" + num(range(0, size)) + " " + num(range(0, size));
        int segs = 2 + static_cast<int>(rng() % 4);
        for (int s = 0; s < segs; ++s) {
            d += " C" + num(range(0, size)) + " " + num(range(0, size)) + " " +
                 num(range(0, size)) + " " + num(range(0, size)) + " " + num(range(0, size)) +
                 " " + num(range(0, size));
        }
        if (rng() % 2) d += " Z";
        char fill[16];
        std::snprintf(fill, sizeof(fill), "#%06x", static_cast<unsigned>(rng() % 0xffffff));
        out += "<path d=\"" + d + "\" fill=\"" + fill + "\"/>\n";
    }
    if (rng() % 3 == 0)
        out += "<circle cx=\"" + num(range(0, size)) + "\" cy=\"" + num(range(0, size)) +
               "\" r=\"" + num(range(1, size / 3)) + "\"/>\n";
    if (rng() % 3 == 0)
        out += "<rect x=\"" + num(range(0, size / 2)) + "\" y=\"" + num(range(0, size / 2)) +
               "\" width=\"" + num(range(1, size / 2)) + "\" height=\"" +
               num(range(1, size / 2)) + "\" rx=\"2\"/>\n";
    out += "</svg>\n";
    return out;
}

std::pair<bool, std::string> criterion4() {
    std::vector<tree::LabeledSample> samples;
    for (chartgen::ChartType type : chartgen::kAllChartTypes) {
        for (int i = 0; i < 50; ++i) {
            chartgen::ChartSpec spec;
            spec.chart_type = type;
            spec.seed = static_cast<uint64_t>(i);
            spec.n_points = 8 + i % 17;
            auto doc = svg::parse_svg(chartgen::generate_chart(spec));
            samples.push_back({features::extract_features(doc).values, "vis"});
        }
    }
    for (uint64_t seed = 0; seed < 400; ++seed) {
        auto doc = svg::parse_svg(generate_non_chart(seed));
        samples.push_back({features::extract_features(doc).values, "non-vis"});
    }
    auto report = eval::cross_validate(samples, 5, 10, 0);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "binary accuracy %.4f", report.mean_accuracy);
    std::cerr << "  vis/non-vis: " << buf << "\n";
    return {report.mean_accuracy >= 0.95, buf};
}

std::optional<tree::SplitCandidate> brute_force_split(
    const std::vector<tree::LabeledSample>& samples) {
    std::optional<tree::SplitCandidate> best;
    size_t n_features = samples[0].values.size();
    std::map<std::string, int> total_hist;
    for (const auto& s : samples) ++total_hist[s.label];
    double parent = tree::gini_impurity(total_hist);
    double n = static_cast<double>(samples.size());
    for (size_t fi = 0; fi < n_features; ++fi) {
        std::vector<double> vals;
        for (const auto& s : samples) vals.push_back(s.values[fi]);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (size_t i = 0; i + 1 < vals.size(); ++i) {
            double threshold = (vals[i] + vals[i + 1]) / 2.0;
            std::map<std::string, int> lh, rh;
            int lc = 0, rc = 0;
            for (const auto& s : samples) {
                if (s.values[fi] <= threshold) { ++lh[s.label]; ++lc; }
                else { ++rh[s.label]; ++rc; }
            }
            if (lc == 0 || rc == 0) continue;
            double decrease = parent - (lc / n) * tree::gini_impurity(lh) -
                              (rc / n) * tree::gini_impurity(rh);
            if (!best || decrease > best->impurity_decrease)
                best = tree::SplitCandidate{static_cast<int>(fi), threshold, decrease, lc, rc};
        }
    }
    return best;
}

std::pair<bool, std::string> criterion5() {
    std::mt19937_64 rng(2024);
    int mismatches = 0, events = 0;
    for (int dataset = 0; dataset < 200; ++dataset) {
        int n = 2 + static_cast<int>(rng() % 49);
        int n_features = 1 + static_cast<int>(rng() % 5);
        int n_labels = 1 + static_cast<int>(rng() % 3);
        std::vector<tree::LabeledSample> samples;
        for (int i = 0; i < n; ++i) {
            std::vector<double> values;
            for (int k = 0; k < n_features; ++k)
                values.push_back(static_cast<double>(rng() % 12));
            samples.push_back(
                {values, std::string(1, static_cast<char>('A' + rng() % n_labels))});
        }
        tree::SplitTrace trace;
        tree::fit_tree(samples, {}, &trace);
        for (const auto& event : trace) {
            ++events;
            std::vector<tree::LabeledSample> subset;
            for (size_t idx : event.sample_indices) subset.push_back(samples[idx]);
            auto oracle = brute_force_split(subset);
            if (!oracle || event.chosen.feature_index != oracle->feature_index ||
                event.chosen.threshold != oracle->threshold ||
                event.chosen.left_count != oracle->left_count ||
                event.chosen.right_count != oracle->right_count)
                ++mismatches;
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%d mismatches over %d splits", mismatches, events);
    return {mismatches == 0 && events > 200, buf};
}

std::pair<bool, std::string> criterion6() {
    const fs::path dir = SVGCHART_GOLDEN_DIR;
    const auto& manifest = features::feature_manifest();
    int fixtures = 0, bad = 0;
    std::string detail;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".svg") continue;
        ++fixtures;
        std::map<std::string, std::string> expected;
        {
            std::ifstream in(fs::path(entry.path()).replace_extension(".expected"));
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || line[0] == '#') continue;
                size_t space = line.find(' ');
                expected[line.substr(0, space)] = line.substr(space + 1);
            }
        }
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        auto vec = features::extract_features(svg::parse_svg(ss.str()));
        for (size_t i = 0; i < manifest.size(); ++i) {
            auto it = expected.find(manifest.entries[i].id);
            std::string want = it == expected.end() ? "0" : it->second;
            if (features::format_value(vec.values[i]) != want) {
                ++bad;
                if (detail.size() < 200)
                    detail += entry.path().filename().string() + ":" + manifest.entries[i].id + " ";
            }
        }
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%d fixtures, %d mismatches; ", fixtures, bad);
    return {fixtures >= 10 && bad == 0, buf + detail};
}

std::pair<bool, std::string> criterion7() {
    std::mt19937_64 rng(7);
    std::vector<std::string> labels;
    for (int i = 0; i < 31; ++i) labels.push_back("a");
    for (int i = 0; i < 17; ++i) labels.push_back("b");
    for (int i = 0; i < 9; ++i) labels.push_back("c");
    std::shuffle(labels.begin(), labels.end(), rng);

    auto assignment = eval::stratified_folds(labels, 5, 3);
    std::map<std::string, std::map<int, int>> per_class;
    for (size_t i = 0; i < labels.size(); ++i) ++per_class[labels[i]][assignment.fold_of[i]];
    for (auto& [label, folds] : per_class) {
        int lo = 1 << 30, hi = 0, total = 0;
        for (int f = 0; f < 5; ++f) {
            int c = folds.count(f) ? folds[f] : 0;
            lo = std::min(lo, c);
            hi = std::max(hi, c);
            total += c;
        }
        if (hi - lo > 1) return {false, "fold imbalance for class " + label};
        if (total != static_cast<int>(std::count(labels.begin(), labels.end(), label)))
            return {false, "class " + label + " not fully assigned"};
    }

    auto samples = chart_corpus(12, 77);
    auto r1 = eval::cross_validate(samples, 5, 3, 5);
    auto r2 = eval::cross_validate(samples, 5, 3, 5);
    if (eval::encode_report(r1) != eval::encode_report(r2))
        return {false, "report not byte-identical for the same seed"};
    if (r1.confusion.total() != static_cast<long>(3 * samples.size()))
        return {false, "samples not each tested exactly once per run"};

    auto m1 = tree::encode_model(tree::fit_tree(samples));
    auto m2 = tree::encode_model(tree::fit_tree(samples));
    if (m1 != m2) return {false, "model not byte-identical"};
    return {true, ""};
}

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::pair<bool, std::string> criterion8() {
    httplib::Server server;
    std::mutex mutex;
    std::map<std::string, std::vector<double>> hits;
    auto record = [&](const std::string& path) {
        std::lock_guard lock(mutex);
        hits[path].push_back(now_seconds());
    };
    server.Get("/robots.txt", [&](const httplib::Request&, httplib::Response& res) {
        record("/robots.txt");
        res.set_content("User-agent: *\nDisallow: /hidden\n", "text/plain");
    });
    server.Get("/", [&](const httplib::Request&, httplib::Response& res) {
        record("/");
        res.set_content("<html><svg><rect/></svg><a href='/a'>a</a>"
                        "<a href='/hidden/x'>h</a></html>",
                        "text/html");
    });
    server.Get("/a", [&](const httplib::Request&, httplib::Response& res) {
        record("/a");
        res.set_content("<html><svg><circle r='3'/></svg></html>", "text/html");
    });
    server.Get("/hidden/x", [&](const httplib::Request&, httplib::Response& res) {
        record("/hidden/x");
        res.set_content("<html><svg><text x='0' y='0'>s</text></svg></html>", "text/html");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    if (port <= 0) return {false, "could not bind stub server"};
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    fs::path dir = fs::temp_directory_path() / "svgchart_acceptance_crawl";
    fs::remove_all(dir);
    std::string base = "http://127.0.0.1:" + std::to_string(port);

    corpus::CrawlPolicy policy;
    policy.per_host_delay = 0.2;
    policy.max_depth = 1;
    policy.jobs = 2;

    std::string first_manifest, second_manifest;
    bool ok = true;
    std::string detail;
    {
        corpus::CorpusStore store(dir);
        auto added = corpus::crawl({base + "/"}, policy, store);
        if (added.size() != 2) {
            ok = false;
            detail += "expected 2 svgs, got " + std::to_string(added.size()) + "; ";
        }
        std::ifstream in(dir / "manifest.jsonl", std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        first_manifest = ss.str();
    }
    {
        corpus::CorpusStore store(dir);
        corpus::crawl({base + "/"}, policy, store);
        std::ifstream in(dir / "manifest.jsonl", std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        second_manifest = ss.str();
    }
    server.stop();
    server_thread.join();

    if (first_manifest.empty() || first_manifest != second_manifest) {
        ok = false;
        detail += "double-crawl manifests differ; ";
    }
    if (!hits["/hidden/x"].empty()) {
        ok = false;
        detail += "robots disallow ignored; ";
    }
    std::vector<double> all;
    for (const auto& [path, times] : hits)
        if (path != "/robots.txt")
            for (double t : times) all.push_back(t);
    std::sort(all.begin(), all.end());
    for (size_t i = 1; i < all.size(); ++i) {
        if (all[i] - all[i - 1] < 0.19) {
            ok = false;
            detail += "inter-request spacing below per-host delay; ";
            break;
        }
    }
    return {ok, detail};
}

}  // namespace

int main() {
    run("1 usage table cells reproduced at 1-decimal rounding", criterion1);
    run("2 top-four coverage within 0.05pp of stated figures", criterion2);
    run("3 synthetic 8-type corpus 5-fold x10 mean accuracy >= 0.95", criterion3);
    run("4 binary vis/non-vis accuracy >= 0.95", criterion4);
    run("5 split choices match brute-force oracle on 200 datasets", criterion5);
    run("6 golden feature vectors match at 9 significant digits", criterion6);
    run("7 protocol invariants: balance, coverage, byte-stable outputs", criterion7);
    run("8 crawler politeness and idempotence on local stub site", criterion8);
    return failures == 0 ? 0 : 1;
}
