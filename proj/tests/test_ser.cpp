#include <gtest/gtest.h>

#include "rft/induction.hpp"
#include "rft/ser.hpp"
#include "support.hpp"

using namespace rft;

namespace {

Tree stump() {
    Tree t;
    Node root;
    root.kind = NodeKind::numeric_split;
    root.feature = 0;
    root.threshold = 0.5;
    root.retained_left = LabelDistribution::from_counts({4, 0});
    root.retained_right = LabelDistribution::from_counts({0, 4});
    t.add(root);
    t.add(Node{.distribution = LabelDistribution::from_counts({4, 0})});
    t.add(Node{.distribution = LabelDistribution::from_counts({0, 4})});
    t.node(0).children = {1, 2};
    return t;
}

Dataset all_negative() {
    return rft::testing::grid_1d(10, 0.5, [](double) { return 0; });
}

}  // namespace

TEST(Ser, ErrorCounts) {
    const Dataset d = all_negative();
    const auto rows = d.all_rows();
    EXPECT_EQ(leaf_error(d, rows), 0u);
    // The right leaf of the stump calls every row above 0.5 positive.
    EXPECT_EQ(subtree_error(stump(), 0, d, rows), 5u);
    EXPECT_EQ(subtree_error(stump(), 1, d, rows), 0u);
}

TEST(Ser, ReductionAloneCollapsesNoisySubtree) {
    const Dataset d = all_negative();
    InductionConfig cfg;
    const auto r = ser_tree(stump(), d, d.all_rows(), cfg, 1, {.expand = false, .reduce = true});
    ASSERT_EQ(r.tree.size(), 1u);
    EXPECT_EQ(r.tree.root().distribution, LabelDistribution::from_counts({10, 0}));
    EXPECT_EQ(r.stats.reduced_nodes, 1u);
}

TEST(Ser, ExpansionRefitsReachedLeaves) {
    const Dataset d = all_negative();
    InductionConfig cfg;
    const auto r = ser_tree(stump(), d, d.all_rows(), cfg, 1);
    ASSERT_EQ(r.tree.size(), 3u);
    EXPECT_EQ(r.tree.node(2).distribution, LabelDistribution::from_counts({5, 0}));
    EXPECT_EQ(r.stats.reduced_nodes, 0u);
}

TEST(Ser, UnreachedLeavesKeepSourceDistribution) {
    Dataset d(numeric_schema(1, 2));
    d.add_row({0.1}, 1);
    d.add_row({0.2}, 1);
    InductionConfig cfg;
    const auto r = ser_tree(stump(), d, d.all_rows(), cfg, 3);
    EXPECT_EQ(r.tree.node(1).distribution, LabelDistribution::from_counts({0, 2}));
    EXPECT_EQ(r.tree.node(2).distribution, LabelDistribution::from_counts({0, 4}));
}

TEST(Ser, NoTargetRowsLeavesTreeUnchanged) {
    Rng rng(4);
    const Schema s = rft::testing::mixed_schema(2);
    const Dataset d(s);
    InductionConfig cfg;
    for (int i = 0; i < 20; ++i) {
        const Tree t = rft::testing::random_tree(rng, s, 4);
        EXPECT_EQ(ser_tree(t, d, {}, cfg, 1).tree, t.compacted());
    }
}

TEST(Ser, FitsDistinctTargetRowsAndNeverReduces) {
    Rng rng(14);
    InductionConfig cfg;
    for (int i = 0; i < 50; ++i) {
        Dataset src(numeric_schema(3, 2)), tgt(numeric_schema(3, 2));
        for (int k = 0; k < 120; ++k) {
            const double x[] = {rft::testing::uniform(rng), rft::testing::uniform(rng), rft::testing::uniform(rng)};
            (k < 90 ? src : tgt).add_row(x, rft::testing::uniform_int(rng, 0, 1));
        }
        Rng tree_rng(static_cast<std::uint64_t>(i));
        const Tree t = build_tree(src, src.all_rows(), cfg, tree_rng);
        const auto r = ser_tree(t, tgt, tgt.all_rows(), cfg, static_cast<std::uint64_t>(i));
        EXPECT_EQ(subtree_error(r.tree, 0, tgt, tgt.all_rows()), 0u);
        EXPECT_EQ(r.stats.reduced_nodes, 0u);
    }
}

TEST(Ser, RuleContainment) {
    Rng rng(2024);
    const Schema s = rft::testing::mixed_schema(2);
    InductionConfig cfg;
    for (int i = 0; i < 200; ++i) {
        const Tree t = rft::testing::random_tree(rng, s, 4);
        const Dataset target = rft::testing::random_mixed(rng, 50, 2);
        const auto rows = rft::testing::random_rows(rng, target.size(), 50);
        for (SerOptions o : {SerOptions{}, SerOptions{.expand = false}}) {
            const auto r = ser_tree(t, target, rows, cfg, static_cast<std::uint64_t>(i), o);
            ASSERT_EQ(rft::testing::containment_violations(t, r.tree), 0u);
        }
    }
}

TEST(Ser, ForestIsDeterministicAcrossWorkers) {
    Rng rng(10);
    const Dataset src = rft::testing::random_mixed(rng, 300, 2);
    const Dataset tgt = rft::testing::random_mixed(rng, 60, 2);
    InductionConfig cfg;
    cfg.tree_count = 12;
    const Forest f = build_forest(src, cfg);
    const auto rows = tgt.all_rows();
    SerStats a, b;
    const Forest serial = ser_forest(f, tgt, rows, cfg, 1, &a);
    EXPECT_EQ(ser_forest(f, tgt, rows, cfg, 4, &b), serial);
    EXPECT_EQ(a.expanded_leaves, b.expanded_leaves);
    EXPECT_EQ(a.nodes_after, b.nodes_after);
    EXPECT_EQ(serial.provenance, "ser");
    for (std::size_t t = 0; t < f.size(); ++t)
        EXPECT_EQ(serial.trees[t], ser_tree(f.trees[t], tgt, rows, cfg, derive_seed(cfg.seed, t)).tree);
}
