#include "rft/forest.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "rft/error.hpp"
#include "rft/parallel.hpp"

namespace rft {

std::vector<double> uniform_weights(std::size_t n) {
    return std::vector<double>(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
}

namespace {

void validate_tree(const Tree& tree, const Schema& schema, std::size_t index) {
    const auto where = [&](std::size_t node) {
        return "tree " + std::to_string(index) + " node " + std::to_string(node) + ": ";
    };
    if (tree.empty()) throw DataError("tree " + std::to_string(index) + " is empty");
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const Node& n = tree.nodes()[i];
        for (auto c : n.children)
            if (c <= static_cast<NodeId>(i) || static_cast<std::size_t>(c) >= tree.size())
                throw DataError(where(i) + "bad child reference");
        if (n.is_leaf()) {
            if (!n.children.empty()) throw DataError(where(i) + "leaf with children");
            if (n.distribution.classes() != schema.class_count())
                throw DataError(where(i) + "leaf distribution does not match class count");
            continue;
        }
        if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= schema.feature_count())
            throw DataError(where(i) + "feature index out of range");
        const auto& spec = schema.features[static_cast<std::size_t>(n.feature)];
        if (n.kind == NodeKind::numeric_split) {
            if (spec.kind != FeatureKind::numeric) throw DataError(where(i) + "numeric split on categorical feature");
            if (n.children.size() != 2) throw DataError(where(i) + "numeric split needs two children");
            if (!std::isfinite(n.threshold)) throw DataError(where(i) + "non-finite threshold");
            if (n.retained_left.empty() || n.retained_right.empty() ||
                n.retained_left.classes() != schema.class_count() ||
                n.retained_right.classes() != schema.class_count())
                throw DataError(where(i) + "numeric split lacks retained distributions");
        } else {
            if (spec.kind != FeatureKind::categorical)
                throw DataError(where(i) + "categorical split on numeric feature");
            if (n.children.size() != spec.categories.size())
                throw DataError(where(i) + "categorical split needs one child per category");
        }
    }
}

}  // namespace

void validate(const Forest& forest) {
    if (forest.weights.size() != forest.trees.size()) throw DataError("weights and trees differ in length");
    double sum = 0.0;
    for (double w : forest.weights) {
        if (!(w >= 0.0)) throw DataError("negative tree weight");
        sum += w;
    }
    if (!forest.trees.empty() && std::abs(sum - 1.0) > 1e-9) throw DataError("tree weights do not sum to 1");
    for (std::size_t t = 0; t < forest.trees.size(); ++t) validate_tree(forest.trees[t], forest.schema, t);
}

void check_compatible(const Schema& model, const Schema& data) {
    if (!(model.features == data.features)) throw DataError("dataset features do not match the model schema");
    if (model.classes != data.classes) throw DataError("dataset classes do not match the model schema");
}

Prediction predict(const Forest& forest, std::span<const double> x) {
    forest.schema.check_row(x);
    Prediction p;
    p.scores.assign(forest.schema.class_count(), 0.0);
    for (std::size_t t = 0; t < forest.trees.size(); ++t)
        p.scores[static_cast<std::size_t>(forest.trees[t].predict(x))] += forest.weights[t];
    for (std::size_t c = 1; c < p.scores.size(); ++c)
        if (p.scores[c] > p.scores[static_cast<std::size_t>(p.label)]) p.label = static_cast<int>(c);
    return p;
}

std::vector<int> predict_all(const Forest& forest, const Dataset& data, int workers) {
    check_compatible(forest.schema, data.schema());
    std::vector<int> out(data.size());
    parallel_for(data.size(), workers, [&](std::size_t i) { out[i] = predict(forest, data.row(i)).label; });
    return out;
}

std::vector<int> tree_votes(const Forest& forest, const Dataset& data, int workers) {
    check_compatible(forest.schema, data.schema());
    const std::size_t n_trees = forest.trees.size();
    std::vector<int> votes(data.size() * n_trees);
    parallel_for(data.size(), workers, [&](std::size_t i) {
        const auto x = data.row(i);
        for (std::size_t t = 0; t < n_trees; ++t) votes[i * n_trees + t] = forest.trees[t].predict(x);
    });
    return votes;
}

}  // namespace rft
