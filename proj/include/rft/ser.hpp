#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "rft/dataset.hpp"
#include "rft/forest.hpp"
#include "rft/induction.hpp"
#include "rft/tree.hpp"

namespace rft {

struct SerStats {
    std::size_t expanded_leaves = 0;
    std::size_t reduced_nodes = 0;
    std::size_t nodes_before = 0;
    std::size_t nodes_after = 0;

    SerStats& operator+=(const SerStats& other);
};

struct SerOptions {
    bool expand = true;
    bool reduce = true;
};

struct SerResult {
    Tree tree;
    SerStats stats;
};

/// |S_v| minus the majority-class count.
std::uint64_t leaf_error(const Dataset& data, std::span<const std::size_t> rows);

/// Misclassifications of `rows` routed through the subtree of `tree` at `id`.
std::uint64_t subtree_error(const Tree& tree, NodeId id, const Dataset& data, std::span<const std::size_t> rows);

/// Structure expansion/reduction of one tree on target rows. Leaves reached
/// by target rows are regrown with build_tree (node seeds derived from
/// `seed` and the source node id); afterwards, bottom-up, a subtree is
/// collapsed to a majority leaf when that strictly lowers the error on the
/// rows reaching it.
SerResult ser_tree(const Tree& source, const Dataset& target, std::span<const std::size_t> rows,
                   const InductionConfig& config, std::uint64_t seed, SerOptions options = {});

/// ser_tree on every tree; tree t uses derive_seed(config.seed, t).
Forest ser_forest(const Forest& forest, const Dataset& target, std::span<const std::size_t> rows,
                  const InductionConfig& config, int workers = 1, SerStats* stats = nullptr);
Forest ser_forest(const Forest& forest, const Dataset& target, const InductionConfig& config, int workers = 1);

}  // namespace rft
