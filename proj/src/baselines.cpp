#include "rft/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "rft/parallel.hpp"
#include "rft/ser.hpp"

namespace rft {

Forest src_only(const Forest& source) {
    Forest out = source;
    out.provenance = "src_only";
    return out;
}

Forest tgt_only(const Dataset& target, std::span<const std::size_t> rows, const InductionConfig& config,
                int workers) {
    Forest out = build_forest(target, rows, config, workers);
    out.provenance = "tgt_only";
    return out;
}

namespace {

Tree relabel_tree(const Tree& tree, const Dataset& target, std::span<const std::size_t> rows) {
    std::vector<LabelDistribution> reached(tree.size());
    for (auto r : rows) {
        auto& d = reached[static_cast<std::size_t>(tree.route(target.row(r)))];
        if (d.classes() == 0) d = LabelDistribution(target.schema().class_count());
        d.add(target.label(r));
    }
    Tree out = tree;
    for (std::size_t i = 0; i < tree.size(); ++i)
        if (!reached[i].empty()) out.node(static_cast<NodeId>(i)).distribution = std::move(reached[i]);
    return out;
}

}  // namespace

Forest relabel(const Forest& forest, const Dataset& target, std::span<const std::size_t> rows, int workers) {
    check_compatible(forest.schema, target.schema());
    Forest out = forest;
    out.provenance = "relabel";
    parallel_for(forest.size(), workers,
                 [&](std::size_t t) { out.trees[t] = relabel_tree(forest.trees[t], target, rows); });
    return out;
}

Forest bias(const Forest& forest, const Dataset& target, std::span<const std::size_t> rows, BiasScheme scheme,
            int workers) {
    check_compatible(forest.schema, target.schema());
    constexpr double floor = 1e-6;
    constexpr double temperature = 0.1;
    std::vector<double> accuracy(forest.size(), 1.0);
    parallel_for(forest.size(), workers, [&](std::size_t t) {
        if (rows.empty()) return;
        std::size_t correct = 0;
        for (auto r : rows)
            if (forest.trees[t].predict(target.row(r)) == target.label(r)) ++correct;
        accuracy[t] = static_cast<double>(correct) / static_cast<double>(rows.size());
    });
    Forest out = forest;
    double total = 0.0;
    for (std::size_t t = 0; t < forest.size(); ++t) {
        out.weights[t] = scheme == BiasScheme::accuracy ? std::max(accuracy[t], floor)
                                                        : std::exp(-(1.0 - accuracy[t]) / temperature);
        total += out.weights[t];
    }
    for (auto& w : out.weights) w /= total;
    out.provenance = scheme == BiasScheme::accuracy ? "bias:accuracy" : "bias:softmax";
    return out;
}

Forest prune(const Forest& forest, const Dataset& target, std::span<const std::size_t> rows, int workers) {
    check_compatible(forest.schema, target.schema());
    Forest out = forest;
    out.provenance = "prune";
    const InductionConfig unused;
    parallel_for(forest.size(), workers, [&](std::size_t t) {
        out.trees[t] = ser_tree(forest.trees[t], target, rows, unused, 0, {.expand = false, .reduce = true}).tree;
    });
    return out;
}

}  // namespace rft
