#include "rft/ser.hpp"

#include "rft/parallel.hpp"
#include "rft/random.hpp"

namespace rft {

SerStats& SerStats::operator+=(const SerStats& other) {
    expanded_leaves += other.expanded_leaves;
    reduced_nodes += other.reduced_nodes;
    nodes_before += other.nodes_before;
    nodes_after += other.nodes_after;
    return *this;
}

std::uint64_t leaf_error(const Dataset& data, std::span<const std::size_t> rows) {
    return data.distribution(rows).minority();
}

std::uint64_t subtree_error(const Tree& tree, NodeId id, const Dataset& data, std::span<const std::size_t> rows) {
    std::uint64_t errors = 0;
    for (auto r : rows)
        if (tree.node(tree.route(data.row(r), id)).distribution.argmax() != data.label(r)) ++errors;
    return errors;
}

namespace {

class SerPass {
public:
    SerPass(const Tree& source, const Dataset& target, const InductionConfig& config, std::uint64_t seed,
            SerOptions options)
        : source_(source), target_(target), config_(config), seed_(seed), options_(options) {}

    SerResult run(std::span<const std::size_t> rows) {
        stats_.nodes_before = source_.size();
        visit(0, rows);
        SerResult result{out_.compacted(), stats_};
        result.stats.nodes_after = result.tree.size();
        return result;
    }

private:
    // Returns the id of the rewritten copy of source node `id` in `out_`.
    NodeId visit(NodeId id, std::span<const std::size_t> rows) {
        const Node& src = source_.node(id);
        if (src.is_leaf()) {
            if (rows.empty() || !options_.expand) return out_.add(src);
            Rng rng(derive_seed(seed_, static_cast<std::uint64_t>(id)));
            const Tree grown = build_tree(target_, rows, config_, rng);
            if (grown.size() > 1) ++stats_.expanded_leaves;
            return out_.graft(grown);
        }

        std::vector<std::vector<std::size_t>> parts(src.children.size());
        for (auto r : rows) parts[source_.branch(id, target_.row(r))].push_back(r);

        Node copy = src;
        copy.children.clear();
        const NodeId here = out_.add(std::move(copy));
        std::vector<NodeId> children;
        for (std::size_t b = 0; b < parts.size(); ++b) children.push_back(visit(src.children[b], parts[b]));
        out_.node(here).children = std::move(children);

        if (options_.reduce && !rows.empty()) {
            const auto as_leaf = leaf_error(target_, rows);
            const auto as_subtree = subtree_error(out_, here, target_, rows);
            if (as_leaf < as_subtree) {
                Node& n = out_.node(here);
                n.kind = NodeKind::leaf;
                n.feature = -1;
                n.threshold = 0.0;
                n.children.clear();
                n.retained_left = {};
                n.retained_right = {};
                n.distribution = target_.distribution(rows);
                ++stats_.reduced_nodes;
            }
        }
        return here;
    }

    const Tree& source_;
    const Dataset& target_;
    const InductionConfig& config_;
    std::uint64_t seed_;
    SerOptions options_;
    Tree out_;
    SerStats stats_;
};

}  // namespace

SerResult ser_tree(const Tree& source, const Dataset& target, std::span<const std::size_t> rows,
                   const InductionConfig& config, std::uint64_t seed, SerOptions options) {
    return SerPass(source, target, config, seed, options).run(rows);
}

Forest ser_forest(const Forest& forest, const Dataset& target, std::span<const std::size_t> rows,
                  const InductionConfig& config, int workers, SerStats* stats) {
    check_compatible(forest.schema, target.schema());
    Forest out;
    out.schema = forest.schema;
    out.trees.resize(forest.size());
    out.weights = uniform_weights(forest.size());
    out.provenance = "ser";
    std::vector<SerStats> per_tree(forest.size());
    parallel_for(forest.size(), workers, [&](std::size_t t) {
        auto result = ser_tree(forest.trees[t], target, rows, config, derive_seed(config.seed, t));
        out.trees[t] = std::move(result.tree);
        per_tree[t] = result.stats;
    });
    if (stats)
        for (const auto& s : per_tree) *stats += s;
    return out;
}

Forest ser_forest(const Forest& forest, const Dataset& target, const InductionConfig& config, int workers) {
    const auto rows = target.all_rows();
    return ser_forest(forest, target, rows, config, workers);
}

}  // namespace rft
