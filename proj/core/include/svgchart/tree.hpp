#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace svgchart::tree {

struct EmptyHistogram : std::runtime_error {
    EmptyHistogram() : std::runtime_error("empty histogram") {}
};
struct EmptyDataset : std::runtime_error {
    EmptyDataset() : std::runtime_error("empty dataset") {}
};
struct InconsistentVectorLength : std::runtime_error {
    InconsistentVectorLength() : std::runtime_error("inconsistent feature vector lengths") {}
};
struct VectorLengthMismatch : std::runtime_error {
    VectorLengthMismatch() : std::runtime_error("vector length does not match model") {}
};
struct UnsupportedVersion : std::runtime_error {
    explicit UnsupportedVersion(const std::string& v)
        : std::runtime_error("unsupported model version: " + v) {}
};
struct CorruptModel : std::runtime_error {
    explicit CorruptModel(const std::string& what) : std::runtime_error("corrupt model: " + what) {}
};

struct LabeledSample {
    std::vector<double> values;
    std::string label;
};

struct TreeNode {
    int feature = -1;       // -1 for leaves
    double threshold = 0;   // value <= threshold goes left
    int left = -1, right = -1;
    std::map<std::string, int> histogram;  // populated on leaves

    bool is_leaf() const { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // node 0 is the root
    std::string manifest_version;
    std::vector<std::string> label_set;  // sorted
    int n_features = -1;

    bool operator==(const TreeModel&) const = default;
};

struct TrainParams {
    std::optional<int> max_depth;
    int min_samples_split = 2;
    int min_samples_leaf = 1;
};

struct SplitCandidate {
    int feature_index = -1;
    double threshold = 0;
    double impurity_decrease = 0;
    int left_count = 0, right_count = 0;
};

// Optional training trace: the sample subset and the chosen split at every
// internal node, in the order nodes were split.
struct SplitEvent {
    std::vector<size_t> sample_indices;
    SplitCandidate chosen;
};
using SplitTrace = std::vector<SplitEvent>;

// 1 - sum(p_i^2). Throws EmptyHistogram when total count is zero.
double gini_impurity(const std::map<std::string, int>& counts);

// Best midpoint split of one feature over `samples`; nullopt when constant.
// Tie-break within the feature: smallest threshold.
std::optional<SplitCandidate> best_split(std::span<const LabeledSample> samples,
                                         int feature_index);

// Greedy CART with Gini criterion, deterministic tie-breaks: largest impurity
// decrease, then lowest feature index, then lowest threshold.
TreeModel fit_tree(std::span<const LabeledSample> samples, const TrainParams& params = {},
                   SplitTrace* trace = nullptr);

// (label, leaf-majority fraction); ties pick the lexicographically smallest label.
std::pair<std::string, double> predict(const TreeModel& model, std::span<const double> values);

std::string encode_model(const TreeModel& model);
TreeModel decode_model(std::string_view text);

}  // namespace svgchart::tree
