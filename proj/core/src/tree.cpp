#include "svgchart/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

namespace svgchart::tree {

double gini_impurity(const std::map<std::string, int>& counts) {
    long total = 0;
    for (const auto& [label, count] : counts) total += count;
    if (total <= 0) throw EmptyHistogram();
    double sum_sq = 0;
    for (const auto& [label, count] : counts) {
        double p = static_cast<double>(count) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

namespace {

std::optional<SplitCandidate> best_split_subset(std::span<const LabeledSample> samples,
                                                std::span<const size_t> indices,
                                                int feature, int min_samples_leaf) {
    const size_t n = indices.size();
    if (n < 2) return std::nullopt;

    std::vector<std::pair<double, const std::string*>> values;
    values.reserve(n);
    std::map<std::string, int> right;
    for (size_t i : indices) {
        values.emplace_back(samples[i].values[static_cast<size_t>(feature)], &samples[i].label);
        ++right[samples[i].label];
    }
    std::sort(values.begin(), values.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (values.front().first == values.back().first) return std::nullopt;  // constant feature

    const double parent_gini = gini_impurity(right);
    const double dn = static_cast<double>(n);

    std::map<std::string, int> left;
    std::optional<SplitCandidate> best;
    for (size_t i = 0; i + 1 < n; ++i) {
        const std::string& label = *values[i].second;
        ++left[label];
        if (--right[label] == 0) right.erase(label);
        if (values[i + 1].first == values[i].first) continue;

        size_t left_count = i + 1, right_count = n - left_count;
        if (left_count < static_cast<size_t>(min_samples_leaf) ||
            right_count < static_cast<size_t>(min_samples_leaf))
            continue;

        double decrease = parent_gini -
                          (static_cast<double>(left_count) / dn) * gini_impurity(left) -
                          (static_cast<double>(right_count) / dn) * gini_impurity(right);
        // strict > keeps the smallest qualifying threshold on ties
        if (!best || decrease > best->impurity_decrease) {
            SplitCandidate c;
            c.feature_index = feature;
            c.threshold = (values[i].first + values[i + 1].first) / 2.0;
            c.impurity_decrease = decrease;
            c.left_count = static_cast<int>(left_count);
            c.right_count = static_cast<int>(right_count);
            best = c;
        }
    }
    return best;
}

struct Builder {
    std::span<const LabeledSample> samples;
    const TrainParams& params;
    SplitTrace* trace;
    std::vector<TreeNode> nodes;
    size_t n_features;

    int build(std::vector<size_t> indices, int depth) {
        std::map<std::string, int> histogram;
        for (size_t i : indices) ++histogram[samples[i].label];

        bool stop = histogram.size() <= 1 ||
                    indices.size() < static_cast<size_t>(params.min_samples_split) ||
                    (params.max_depth && depth >= *params.max_depth);

        std::optional<SplitCandidate> best;
        if (!stop) {
            for (int feature = 0; feature < static_cast<int>(n_features); ++feature) {
                auto cand = best_split_subset(samples, indices, feature, params.min_samples_leaf);
                if (cand && (!best || cand->impurity_decrease > best->impurity_decrease))
                    best = cand;
            }
        }

        int node_index = static_cast<int>(nodes.size());
        nodes.emplace_back();
        if (!best || best->impurity_decrease <= 0) {
            nodes[static_cast<size_t>(node_index)].histogram = std::move(histogram);
            return node_index;
        }

        if (trace) {
            SplitEvent event;
            event.sample_indices = indices;
            std::sort(event.sample_indices.begin(), event.sample_indices.end());
            event.chosen = *best;
            trace->push_back(std::move(event));
        }

        std::vector<size_t> left, right;
        for (size_t i : indices) {
            if (samples[i].values[static_cast<size_t>(best->feature_index)] <= best->threshold)
                left.push_back(i);
            else
                right.push_back(i);
        }
        indices.clear();
        indices.shrink_to_fit();

        nodes[static_cast<size_t>(node_index)].feature = best->feature_index;
        nodes[static_cast<size_t>(node_index)].threshold = best->threshold;
        int left_index = build(std::move(left), depth + 1);
        nodes[static_cast<size_t>(node_index)].left = left_index;
        int right_index = build(std::move(right), depth + 1);
        nodes[static_cast<size_t>(node_index)].right = right_index;
        return node_index;
    }
};

std::string format_threshold(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::optional<SplitCandidate> best_split(std::span<const LabeledSample> samples,
                                         int feature_index) {
    std::vector<size_t> indices(samples.size());
    std::iota(indices.begin(), indices.end(), size_t{0});
    return best_split_subset(samples, indices, feature_index, 1);
}

TreeModel fit_tree(std::span<const LabeledSample> samples, const TrainParams& params,
                   SplitTrace* trace) {
    if (samples.empty()) throw EmptyDataset();
    size_t n_features = samples.front().values.size();
    std::set<std::string> labels;
    for (const LabeledSample& s : samples) {
        if (s.values.size() != n_features) throw InconsistentVectorLength();
        labels.insert(s.label);
    }

    Builder builder{samples, params, trace, {}, n_features};
    std::vector<size_t> all(samples.size());
    std::iota(all.begin(), all.end(), size_t{0});
    builder.build(std::move(all), 0);

    TreeModel model;
    model.nodes = std::move(builder.nodes);
    model.label_set.assign(labels.begin(), labels.end());
    model.n_features = static_cast<int>(n_features);
    return model;
}

std::pair<std::string, double> predict(const TreeModel& model, std::span<const double> values) {
    if (model.n_features >= 0 && values.size() != static_cast<size_t>(model.n_features))
        throw VectorLengthMismatch();
    if (model.nodes.empty()) throw CorruptModel("no nodes");

    const TreeNode* node = &model.nodes[0];
    while (!node->is_leaf()) {
        int next = values[static_cast<size_t>(node->feature)] <= node->threshold ? node->left
                                                                                 : node->right;
        node = &model.nodes[static_cast<size_t>(next)];
    }

    long total = 0, best_count = 0;
    const std::string* best_label = nullptr;
    for (const auto& [label, count] : node->histogram) {
        total += count;
        if (count > best_count) {  // map order makes ties lexicographic
            best_count = count;
            best_label = &label;
        }
    }
    if (!best_label || total == 0) throw CorruptModel("empty leaf histogram");
    return {*best_label, static_cast<double>(best_count) / static_cast<double>(total)};
}

std::string encode_model(const TreeModel& model) {
    std::string out = "svgchart-model 1\n";
    out += "manifest_version " + (model.manifest_version.empty() ? "-" : model.manifest_version) + "\n";
    out += "features " + std::to_string(model.n_features) + "\n";
    out += "labels " + std::to_string(model.label_set.size()) + "\n";
    for (const auto& label : model.label_set) out += label + "\n";
    out += "nodes " + std::to_string(model.nodes.size()) + "\n";
    for (const TreeNode& node : model.nodes) {
        if (node.is_leaf()) {
            out += "leaf " + std::to_string(node.histogram.size());
            for (const auto& [label, count] : node.histogram)
                out += " " + label + " " + std::to_string(count);
            out += "\n";
        } else {
            out += "split " + std::to_string(node.feature) + " " + format_threshold(node.threshold) +
                   " " + std::to_string(node.left) + " " + std::to_string(node.right) + "\n";
        }
    }
    return out;
}

static TreeModel decode_model_impl(std::string_view text);

TreeModel decode_model(std::string_view text) {
    try {
        return decode_model_impl(text);
    } catch (const UnsupportedVersion&) {
        throw;
    } catch (const CorruptModel&) {
        throw;
    } catch (const std::exception& e) {
        throw CorruptModel(e.what());
    }
}

static TreeModel decode_model_impl(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string word;

    auto need = [&](const char* what) -> std::string {
        std::string token;
        if (!(in >> token)) throw CorruptModel(std::string("missing ") + what);
        return token;
    };

    if (need("magic") != "svgchart-model") throw CorruptModel("bad magic");
    std::string version = need("version");
    if (version != "1") throw UnsupportedVersion(version);

    TreeModel model;
    if (need("manifest_version keyword") != "manifest_version")
        throw CorruptModel("expected manifest_version");
    model.manifest_version = need("manifest_version value");
    if (model.manifest_version == "-") model.manifest_version.clear();

    if (need("features keyword") != "features") throw CorruptModel("expected features");
    model.n_features = std::stoi(need("feature count"));

    if (need("labels keyword") != "labels") throw CorruptModel("expected labels");
    size_t n_labels = std::stoul(need("label count"));
    for (size_t i = 0; i < n_labels; ++i) model.label_set.push_back(need("label"));

    if (need("nodes keyword") != "nodes") throw CorruptModel("expected nodes");
    size_t n_nodes = std::stoul(need("node count"));
    if (n_nodes == 0) throw CorruptModel("zero nodes");

    for (size_t i = 0; i < n_nodes; ++i) {
        std::string kind = need("node kind");
        TreeNode node;
        if (kind == "split") {
            node.feature = std::stoi(need("feature index"));
            node.threshold = std::strtod(need("threshold").c_str(), nullptr);
            node.left = std::stoi(need("left index"));
            node.right = std::stoi(need("right index"));
            if (node.feature < 0 || (model.n_features >= 0 && node.feature >= model.n_features))
                throw CorruptModel("feature index out of range");
        } else if (kind == "leaf") {
            size_t entries = std::stoul(need("leaf entry count"));
            if (entries == 0) throw CorruptModel("empty leaf histogram");
            for (size_t j = 0; j < entries; ++j) {
                std::string label = need("leaf label");
                int count = std::stoi(need("leaf count"));
                if (count <= 0) throw CorruptModel("non-positive leaf count");
                node.histogram[label] = count;
            }
        } else {
            throw CorruptModel("unknown node kind: " + kind);
        }
        model.nodes.push_back(std::move(node));
    }

    for (const TreeNode& node : model.nodes) {
        if (node.is_leaf()) continue;
        if (node.left < 0 || node.right < 0 ||
            node.left >= static_cast<int>(model.nodes.size()) ||
            node.right >= static_cast<int>(model.nodes.size()))
            throw CorruptModel("child index out of range");
    }
    return model;
}

}  // namespace svgchart::tree
