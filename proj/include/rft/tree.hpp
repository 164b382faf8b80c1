#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rft/label_distribution.hpp"

namespace rft {

using NodeId = std::int32_t;

enum class NodeKind : std::uint8_t { leaf, numeric_split, categorical_split };

struct Node {
    NodeKind kind = NodeKind::leaf;
    int feature = -1;
    double threshold = 0.0;  // numeric splits: left iff x[feature] <= threshold
    std::vector<NodeId> children;
    // Label distributions on either side of the threshold at induction time.
    LabelDistribution retained_left;
    LabelDistribution retained_right;
    LabelDistribution distribution;  // leaves only

    bool is_leaf() const noexcept { return kind == NodeKind::leaf; }
    bool operator==(const Node&) const = default;
};

/// Branch index (0 = left, or the category) taken by `x` at a split node.
inline std::size_t branch_of(const Node& n, std::span<const double> x) noexcept {
    const double v = x[static_cast<std::size_t>(n.feature)];
    if (n.kind == NodeKind::numeric_split) return v <= n.threshold ? 0 : 1;
    return static_cast<std::size_t>(v);
}

/// A decision tree stored as a node arena; node 0 is the root.
class Tree {
public:
    Tree() = default;

    static Tree leaf(LabelDistribution dist);

    NodeId add(Node node);
    Node& node(NodeId id) { return nodes_.at(static_cast<std::size_t>(id)); }
    const Node& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    const Node& root() const { return nodes_.front(); }

    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    std::span<const Node> nodes() const noexcept { return nodes_; }

    /// Leaf reached by `x` from `start`.
    NodeId route(std::span<const double> x, NodeId start = 0) const;
    int predict(std::span<const double> x) const { return node(route(x)).distribution.argmax(); }

    /// Branch index (0 = left, or the category) taken by `x` at split node `id`.
    std::size_t branch(NodeId id, std::span<const double> x) const;
    NodeId child_for(NodeId id, std::span<const double> x) const { return node(id).children[branch(id, x)]; }

    std::size_t depth() const;
    std::size_t leaf_count() const;

    /// Sum of leaf distributions below `id`.
    LabelDistribution subtree_distribution(NodeId id) const;

    /// Copies the subtree rooted at `id` of `other` into this arena; returns the new id.
    NodeId graft(const Tree& other, NodeId id = 0);

    /// Copy holding only nodes reachable from the root, in depth-first order.
    Tree compacted() const;

    bool operator==(const Tree&) const = default;

private:
    std::vector<Node> nodes_;
};

/// Root-to-leaf literal sequences. A literal is (node feature, threshold/category, branch).
struct Literal {
    int feature;
    double threshold;  // numeric splits; NaN-free
    int branch;        // 0 = left / category index
    bool operator==(const Literal&) const = default;
};
std::vector<std::vector<Literal>> root_to_leaf_paths(const Tree& tree);

}  // namespace rft
