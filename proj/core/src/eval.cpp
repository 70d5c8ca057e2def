#include "svgchart/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace svgchart::eval {

namespace {

double round1(double v) { return std::round(v * 10.0) / 10.0; }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// Portable Fisher-Yates; std::shuffle's draw sequence is not pinned by the
// standard, and reports must be byte-identical for one seed.
void shuffle_indices(std::vector<size_t>& v, std::mt19937_64& rng) {
    for (size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[rng() % i]);
}

}  // namespace

FoldAssignment stratified_folds(std::span<const std::string> labels, int k, uint64_t seed) {
    if (k < 2) throw BadK(k);

    std::map<std::string, std::vector<size_t>> by_class;
    for (size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    FoldAssignment fa;
    fa.k = k;
    fa.seed = seed;
    fa.fold_of.assign(labels.size(), 0);

    std::mt19937_64 rng(seed);
    for (auto& [label, indices] : by_class) {
        shuffle_indices(indices, rng);
        for (size_t pos = 0; pos < indices.size(); ++pos)
            fa.fold_of[indices[pos]] = static_cast<int>(pos % static_cast<size_t>(k));
    }
    return fa;
}

long ConfusionMatrix::at(const std::string& truth, const std::string& predicted) const {
    auto t = std::lower_bound(labels.begin(), labels.end(), truth);
    auto p = std::lower_bound(labels.begin(), labels.end(), predicted);
    if (t == labels.end() || *t != truth || p == labels.end() || *p != predicted) return 0;
    return counts[static_cast<size_t>(t - labels.begin())][static_cast<size_t>(p - labels.begin())];
}

long ConfusionMatrix::total() const {
    long sum = 0;
    for (const auto& row : counts)
        for (long c : row) sum += c;
    return sum;
}

long ConfusionMatrix::trace() const {
    long sum = 0;
    for (size_t i = 0; i < counts.size(); ++i) sum += counts[i][i];
    return sum;
}

ConfusionMatrix confusion_matrix(std::span<const std::pair<std::string, std::string>> pairs) {
    ConfusionMatrix m;
    for (const auto& [truth, predicted] : pairs) {
        m.labels.push_back(truth);
        m.labels.push_back(predicted);
    }
    std::sort(m.labels.begin(), m.labels.end());
    m.labels.erase(std::unique(m.labels.begin(), m.labels.end()), m.labels.end());
    m.counts.assign(m.labels.size(), std::vector<long>(m.labels.size(), 0));

    auto index = [&](const std::string& label) {
        return static_cast<size_t>(
            std::lower_bound(m.labels.begin(), m.labels.end(), label) - m.labels.begin());
    };
    for (const auto& [truth, predicted] : pairs) ++m.counts[index(truth)][index(predicted)];
    return m;
}

EvalReport cross_validate(std::span<const tree::LabeledSample> samples, int k, int runs,
                          uint64_t seed, const tree::TrainParams& params) {
    if (samples.empty()) throw tree::EmptyDataset();
    if (k < 2) throw BadK(k);

    // classes smaller than k get pooled for fold assignment, keeping labels
    std::map<std::string, int> class_sizes;
    for (const auto& s : samples) ++class_sizes[s.label];
    std::vector<std::string> strata;
    strata.reserve(samples.size());
    for (const auto& s : samples)
        strata.push_back(class_sizes[s.label] < k ? "__rare__" : s.label);

    EvalReport report;
    report.k = k;
    report.runs = runs;
    report.seed = seed;

    std::vector<std::pair<std::string, std::string>> all_pairs;
    for (int run = 0; run < runs; ++run) {
        FoldAssignment fa = stratified_folds(strata, k, seed + static_cast<uint64_t>(run));
        long correct = 0, tested = 0;
        for (int fold = 0; fold < k; ++fold) {
            std::vector<tree::LabeledSample> train;
            std::vector<size_t> test;
            for (size_t i = 0; i < samples.size(); ++i) {
                if (fa.fold_of[i] == fold) test.push_back(i);
                else train.push_back(samples[i]);
            }
            if (train.empty() || test.empty()) continue;
            tree::TreeModel model = tree::fit_tree(train, params);
            for (size_t i : test) {
                auto [label, confidence] = tree::predict(model, samples[i].values);
                all_pairs.emplace_back(samples[i].label, label);
                if (label == samples[i].label) ++correct;
                ++tested;
            }
        }
        report.run_accuracy.push_back(
            tested == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(tested));
    }

    double sum = 0;
    for (double a : report.run_accuracy) sum += a;
    report.mean_accuracy = report.run_accuracy.empty() ? 0.0 : sum / report.run_accuracy.size();
    report.confusion = confusion_matrix(all_pairs);
    return report;
}

std::string encode_report(const EvalReport& report) {
    std::string out = "svgchart-report 1\n";
    out += "k " + std::to_string(report.k) + "\n";
    out += "runs " + std::to_string(report.runs) + "\n";
    out += "seed " + std::to_string(report.seed) + "\n";
    for (size_t i = 0; i < report.run_accuracy.size(); ++i)
        out += "run " + std::to_string(i) + " " + fmt(report.run_accuracy[i]) + "\n";
    out += "mean_accuracy " + fmt(report.mean_accuracy) + "\n";
    out += "confusion " + std::to_string(report.confusion.labels.size()) + "\n";
    for (const auto& label : report.confusion.labels) out += label + "\n";
    for (const auto& row : report.confusion.counts) {
        for (size_t i = 0; i < row.size(); ++i)
            out += (i ? " " : "") + std::to_string(row[i]);
        out += "\n";
    }
    return out;
}

std::string format_report_table(const EvalReport& report) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%d-fold cross validation, %d run(s), seed %llu\n",
                  report.k, report.runs, static_cast<unsigned long long>(report.seed));
    out += buf;
    for (size_t i = 0; i < report.run_accuracy.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "  run %2zu  accuracy %.4f\n", i, report.run_accuracy[i]);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "  mean    accuracy %.4f\n", report.mean_accuracy);
    out += buf;
    return out;
}

UsageReport usage_stats(const std::map<std::string, long>& counts,
                        std::optional<long> total_override) {
    long sum = 0;
    for (const auto& [label, count] : counts) sum += count;
    if (counts.empty() || sum <= 0) throw EmptyCounts();

    UsageReport report;
    report.total = total_override.value_or(sum);
    if (report.total <= 0) throw EmptyCounts();
    const double dt = static_cast<double>(report.total);

    for (const auto& [label, count] : counts) {
        UsageReport::Row row;
        row.label = label;
        row.count = count;
        row.pct = round1(100.0 * static_cast<double>(count) / dt);
        report.rows.push_back(std::move(row));
    }
    std::sort(report.rows.begin(), report.rows.end(), [](const auto& a, const auto& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.label < b.label;
    });

    report.most_popular = report.rows.front().label;
    report.most_popular_pct = report.rows.front().pct;
    if (report.rows.size() > 1) {
        report.second_most_popular = report.rows[1].label;
        report.second_most_popular_pct = report.rows[1].pct;
    }

    long top4 = 0;
    for (const char* label : {"bar", "line", "scatter", "geographic-map"}) {
        auto it = counts.find(label);
        if (it != counts.end()) top4 += it->second;
    }
    report.top4_coverage_raw = 100.0 * static_cast<double>(top4) / dt;
    report.top4_coverage = round1(report.top4_coverage_raw);
    return report;
}

std::string format_usage_table(const UsageReport& report) {
    size_t width = 5;
    for (const auto& row : report.rows) width = std::max(width, row.label.size());

    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%-*s %10s %7s\n", static_cast<int>(width), "label", "count",
                  "pct");
    out += buf;
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof(buf), "%-*s %10ld %6.1f%%\n", static_cast<int>(width),
                      row.label.c_str(), row.count, row.pct);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "total %ld; top-four coverage %.1f%%\n", report.total,
                  report.top4_coverage);
    out += buf;
    return out;
}

}  // namespace svgchart::eval
