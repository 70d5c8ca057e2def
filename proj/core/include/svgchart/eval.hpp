#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "svgchart/tree.hpp"

namespace svgchart::eval {

struct BadK : std::runtime_error {
    explicit BadK(int k) : std::runtime_error("bad fold count: " + std::to_string(k)) {}
};
struct EmptyCounts : std::runtime_error {
    EmptyCounts() : std::runtime_error("empty usage counts") {}
};

struct FoldAssignment {
    std::vector<int> fold_of;  // sample index -> fold id in [0, k)
    int k = 0;
    uint64_t seed = 0;
};

// Per class: shuffle with a seeded generator, deal round-robin into folds.
// Fold sizes within each class differ by at most one.
FoldAssignment stratified_folds(std::span<const std::string> labels, int k, uint64_t seed);

struct ConfusionMatrix {
    std::vector<std::string> labels;  // sorted
    std::vector<std::vector<long>> counts;  // counts[true][predicted]

    long at(const std::string& truth, const std::string& predicted) const;
    long total() const;
    long trace() const;
};

ConfusionMatrix confusion_matrix(std::span<const std::pair<std::string, std::string>> pairs);

struct EvalReport {
    int runs = 0, k = 0;
    uint64_t seed = 0;
    std::vector<double> run_accuracy;
    double mean_accuracy = 0;
    ConfusionMatrix confusion;  // aggregated over all runs
};

// Ten-runs-of-stratified-k-fold protocol: run r draws folds with seed + r,
// trains on k-1 folds and tests on the held-out fold. Classes with fewer than
// k samples are pooled into one stratum for fold assignment only.
EvalReport cross_validate(std::span<const tree::LabeledSample> samples, int k, int runs,
                          uint64_t seed, const tree::TrainParams& params = {});

std::string encode_report(const EvalReport& report);   // stable structured text
std::string format_report_table(const EvalReport& report);  // aligned, for humans

struct UsageReport {
    struct Row {
        std::string label;
        long count = 0;
        double pct = 0;  // rounded to 1 decimal
    };
    long total = 0;
    std::vector<Row> rows;  // descending count, ties lexicographic
    std::string most_popular, second_most_popular;
    double most_popular_pct = 0, second_most_popular_pct = 0;
    double top4_coverage = 0;      // bar+line+scatter+geographic-map, rounded
    double top4_coverage_raw = 0;  // before rounding
};

// `total_override` supports sources whose stated collection size differs from
// the sum of the per-type counts; percentages then use the stated size.
UsageReport usage_stats(const std::map<std::string, long>& counts,
                        std::optional<long> total_override = std::nullopt);

std::string format_usage_table(const UsageReport& report);

}  // namespace svgchart::eval
