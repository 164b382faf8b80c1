#include "rft/induction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rft/information.hpp"
#include "rft/parallel.hpp"

namespace rft {

std::size_t subsample_size(FeatureSubsample rule, std::size_t features) {
    if (features == 0) return 0;
    std::size_t k = features;
    switch (rule) {
        case FeatureSubsample::log2:
            k = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(features))));
            break;
        case FeatureSubsample::sqrt:
            k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(features))));
            break;
        case FeatureSubsample::all:
            break;
    }
    return std::clamp<std::size_t>(k, 1, features);
}

double midpoint(double lo, double hi) noexcept {
    const double m = std::midpoint(lo, hi);
    return m < hi ? m : lo;
}

namespace {

constexpr double positive_gain = 1e-12;

struct SplitCandidate {
    bool valid = false;
    double gain = -1.0;
    int feature = -1;
    double threshold = 0.0;
};

class TreeGrower {
public:
    TreeGrower(const Dataset& data, const InductionConfig& config, Rng& rng)
        : data_(data), config_(config), rng_(rng), classes_(data.schema().class_count()) {}

    Tree grow(std::span<const std::size_t> rows) {
        std::vector<std::size_t> owned(rows.begin(), rows.end());
        grow_node(owned, 0);
        return std::move(tree_);
    }

private:
    NodeId grow_node(std::vector<std::size_t>& rows, int depth) {
        LabelDistribution dist = data_.distribution(rows);
        const bool pure = dist.minority() == 0;
        const bool too_small = static_cast<int>(rows.size()) < config_.min_samples_split;
        const bool too_deep = config_.max_depth && depth >= *config_.max_depth;
        SplitCandidate split;
        if (!pure && !too_small && !too_deep) split = choose_split(rows, dist);
        if (!split.valid) {
            Node leaf;
            leaf.distribution = std::move(dist);
            return tree_.add(std::move(leaf));
        }

        const Schema& schema = data_.schema();
        if (schema.is_numeric(split.feature)) {
            std::vector<std::size_t> left;
            std::vector<std::size_t> right;
            for (auto r : rows) (data_.value(r, split.feature) <= split.threshold ? left : right).push_back(r);
            Node node;
            node.kind = NodeKind::numeric_split;
            node.feature = split.feature;
            node.threshold = split.threshold;
            node.retained_left = data_.distribution(left);
            node.retained_right = data_.distribution(right);
            const NodeId id = tree_.add(std::move(node));
            rows.clear();
            rows.shrink_to_fit();
            const NodeId l = grow_node(left, depth + 1);
            const NodeId r = grow_node(right, depth + 1);
            tree_.node(id).children = {l, r};
            return id;
        }

        const auto categories = schema.features[static_cast<std::size_t>(split.feature)].categories.size();
        std::vector<std::vector<std::size_t>> parts(categories);
        for (auto r : rows) parts[static_cast<std::size_t>(data_.value(r, split.feature))].push_back(r);
        Node node;
        node.kind = NodeKind::categorical_split;
        node.feature = split.feature;
        const NodeId id = tree_.add(std::move(node));
        std::vector<NodeId> children;
        for (auto& part : parts) {
            if (part.empty()) {
                // Unseen branch: fall back on the parent's distribution.
                Node leaf;
                leaf.distribution = dist;
                children.push_back(tree_.add(std::move(leaf)));
            } else {
                children.push_back(grow_node(part, depth + 1));
            }
        }
        tree_.node(id).children = std::move(children);
        return id;
    }

    SplitCandidate choose_split(std::span<const std::size_t> rows, const LabelDistribution& parent) {
        const std::size_t r = data_.feature_count();
        std::vector<int> order(r);
        std::iota(order.begin(), order.end(), 0);
        const std::size_t k = subsample_size(config_.feature_subsample, r);
        for (std::size_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, r - 1);
            std::swap(order[i], order[pick(rng_)]);
        }

        SplitCandidate best;
        const auto consider = [&](int feature) {
            const SplitCandidate c = data_.schema().is_numeric(feature) ? best_numeric(rows, feature, parent)
                                                                        : best_categorical(rows, feature, parent);
            if (c.valid && (!best.valid || c.gain > best.gain + positive_gain)) best = c;
        };
        for (std::size_t i = 0; i < k; ++i) consider(order[i]);
        // Nothing informative among the sampled features: look at the rest.
        if (!best.valid || best.gain <= positive_gain)
            for (std::size_t i = k; i < r; ++i) consider(order[i]);
        return best;
    }

    SplitCandidate best_numeric(std::span<const std::size_t> rows, int feature, const LabelDistribution& parent) {
        sorted_.clear();
        for (auto r : rows) sorted_.emplace_back(data_.value(r, feature), data_.label(r));
        std::sort(sorted_.begin(), sorted_.end());
        left_.assign(classes_, 0);
        std::uint64_t left_total = 0;
        SplitCandidate best;
        for (std::size_t i = 0; i + 1 < sorted_.size(); ++i) {
            ++left_[static_cast<std::size_t>(sorted_[i].second)];
            ++left_total;
            if (!(sorted_[i].first < sorted_[i + 1].first)) continue;
            const double gain = split_gain(parent.counts(), parent.count(), left_, left_total);
            if (!best.valid || gain > best.gain + positive_gain) {
                best.valid = true;
                best.gain = gain;
                best.feature = feature;
                best.threshold = midpoint(sorted_[i].first, sorted_[i + 1].first);
            }
        }
        return best;
    }

    SplitCandidate best_categorical(std::span<const std::size_t> rows, int feature,
                                    const LabelDistribution& parent) {
        const auto categories = data_.schema().features[static_cast<std::size_t>(feature)].categories.size();
        std::vector<LabelDistribution> parts(categories, LabelDistribution(classes_));
        for (auto r : rows) parts[static_cast<std::size_t>(data_.value(r, feature))].add(data_.label(r));
        std::size_t non_empty = 0;
        double children = 0.0;
        const double n = static_cast<double>(parent.count());
        for (const auto& p : parts) {
            if (p.empty()) continue;
            ++non_empty;
            children += static_cast<double>(p.count()) / n * entropy_of_counts(p.counts(), p.count());
        }
        SplitCandidate c;
        if (non_empty < 2) return c;
        c.valid = true;
        c.feature = feature;
        c.gain = std::max(0.0, entropy_of_counts(parent.counts(), parent.count()) - children);
        return c;
    }

    const Dataset& data_;
    const InductionConfig& config_;
    Rng& rng_;
    std::size_t classes_;
    Tree tree_;
    std::vector<std::pair<double, int>> sorted_;
    std::vector<std::uint64_t> left_;
};

}  // namespace

Tree build_tree(const Dataset& data, std::span<const std::size_t> rows, const InductionConfig& config, Rng& rng) {
    if (rows.empty()) throw std::invalid_argument("cannot build a tree from an empty sample set");
    if (data.schema().class_count() == 0) throw std::invalid_argument("schema has no classes");
    if (config.min_samples_split < 1) throw std::invalid_argument("min_samples_split must be positive");
    TreeGrower grower(data, config, rng);
    return grower.grow(rows);
}

Forest build_forest(const Dataset& data, std::span<const std::size_t> rows, const InductionConfig& config,
                    int workers) {
    if (config.tree_count < 1) throw std::invalid_argument("tree_count must be at least 1");
    if (rows.empty()) throw std::invalid_argument("cannot build a tree from an empty sample set");
    Forest forest;
    forest.schema = data.schema();
    forest.trees.resize(static_cast<std::size_t>(config.tree_count));
    forest.weights = uniform_weights(forest.trees.size());
    forest.provenance = "source-trained";
    parallel_for(forest.trees.size(), workers, [&](std::size_t t) {
        Rng rng(derive_seed(config.seed, t));
        if (!config.bootstrap) {
            forest.trees[t] = build_tree(data, rows, config, rng);
            return;
        }
        std::vector<std::size_t> sample(rows.size());
        std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
        for (auto& s : sample) s = rows[pick(rng)];
        forest.trees[t] = build_tree(data, sample, config, rng);
    });
    return forest;
}

Forest build_forest(const Dataset& data, const InductionConfig& config, int workers) {
    const auto rows = data.all_rows();
    return build_forest(data, rows, config, workers);
}

}  // namespace rft
