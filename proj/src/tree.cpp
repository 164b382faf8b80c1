#include "rft/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace rft {

Tree Tree::leaf(LabelDistribution dist) {
    Tree t;
    Node n;
    n.distribution = std::move(dist);
    t.add(std::move(n));
    return t;
}

NodeId Tree::add(Node node) {
    nodes_.push_back(std::move(node));
    return static_cast<NodeId>(nodes_.size() - 1);
}

std::size_t Tree::branch(NodeId id, std::span<const double> x) const {
    const Node& n = node(id);
    if (n.is_leaf()) throw std::logic_error("branch taken at a leaf");
    const auto b = branch_of(n, x);
    if (b >= n.children.size()) throw std::out_of_range("category outside the split's branches");
    return b;
}

NodeId Tree::route(std::span<const double> x, NodeId start) const {
    NodeId id = start;
    while (!node(id).is_leaf()) id = child_for(id, x);
    return id;
}

std::size_t Tree::depth() const {
    if (nodes_.empty()) return 0;
    std::size_t best = 0;
    std::vector<std::pair<NodeId, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        for (auto c : node(id).children) stack.emplace_back(c, d + 1);
    }
    return best;
}

std::size_t Tree::leaf_count() const {
    if (nodes_.empty()) return 0;
    std::size_t leaves = 0;
    std::vector<NodeId> stack{0};
    while (!stack.empty()) {
        const Node& n = node(stack.back());
        stack.pop_back();
        if (n.is_leaf()) ++leaves;
        stack.insert(stack.end(), n.children.begin(), n.children.end());
    }
    return leaves;
}

LabelDistribution Tree::subtree_distribution(NodeId id) const {
    LabelDistribution total;
    std::vector<NodeId> stack{id};
    while (!stack.empty()) {
        const Node& n = node(stack.back());
        stack.pop_back();
        if (n.is_leaf())
            total.merge(n.distribution);
        else
            stack.insert(stack.end(), n.children.begin(), n.children.end());
    }
    return total;
}

NodeId Tree::graft(const Tree& other, NodeId id) {
    Node copy = other.node(id);
    copy.children.clear();
    const NodeId here = add(std::move(copy));
    for (auto c : other.node(id).children) {
        const NodeId child = graft(other, c);
        nodes_[static_cast<std::size_t>(here)].children.push_back(child);
    }
    return here;
}

Tree Tree::compacted() const {
    Tree out;
    if (!nodes_.empty()) out.graft(*this, 0);
    return out;
}

namespace {

void collect_paths(const Tree& tree, NodeId id, std::vector<Literal>& prefix,
                   std::vector<std::vector<Literal>>& out) {
    const Node& n = tree.node(id);
    if (n.is_leaf()) {
        out.push_back(prefix);
        return;
    }
    for (std::size_t b = 0; b < n.children.size(); ++b) {
        const double t = n.kind == NodeKind::numeric_split ? n.threshold : 0.0;
        prefix.push_back({n.feature, t, static_cast<int>(b)});
        collect_paths(tree, n.children[b], prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

std::vector<std::vector<Literal>> root_to_leaf_paths(const Tree& tree) {
    std::vector<std::vector<Literal>> out;
    if (tree.empty()) return out;
    std::vector<Literal> prefix;
    collect_paths(tree, 0, prefix, out);
    return out;
}

}  // namespace rft
