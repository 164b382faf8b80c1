#include <gtest/gtest.h>

#include "rft/error.hpp"
#include "rft/induction.hpp"
#include "rft/strut.hpp"
#include "support.hpp"

using namespace rft;
using rft::testing::grid_1d;
using rft::testing::test_error;

namespace {

Tree induce(const Dataset& d) {
    InductionConfig cfg;
    cfg.feature_subsample = FeatureSubsample::all;
    Rng rng(1);
    return build_tree(d, d.all_rows(), cfg, rng);
}

const Node& right_child(const Tree& t) { return t.node(t.root().children[1]); }

}  // namespace

TEST(Jsd, TaggedValues) {
    const std::vector<double> a{1, 0}, b{0, 1}, u{0.5, 0.5};
    EXPECT_NEAR(jsd(a, b), 1.0, 1e-12);
    EXPECT_NEAR(jsd(u, a), 0.3112781, 1e-6);
    EXPECT_DOUBLE_EQ(jsd(u, u), 0.0);
}

TEST(Jsd, SymmetricBoundedAndMatchesOracle) {
    Rng rng(21);
    for (int i = 0; i < 500; ++i) {
        const std::size_t k = static_cast<std::size_t>(rft::testing::uniform_int(rng, 2, 5));
        std::vector<double> p(k), q(k);
        for (auto& v : p) v = rft::testing::uniform_int(rng, 0, 3);
        for (auto& v : q) v = rft::testing::uniform_int(rng, 0, 3);
        p[0] += 1;
        q[k - 1] += 1;
        p = reference::normalized(p);
        q = reference::normalized(q);
        const double d = jsd(p, q);
        EXPECT_DOUBLE_EQ(d, jsd(q, p));
        EXPECT_GE(d, 0.0);
        EXPECT_LE(d, 1.0);
        EXPECT_NEAR(d, reference::jsd(p, q), 1e-12);
    }
}

TEST(Jsd, Errors) {
    EXPECT_THROW(jsd(std::vector<double>{1.0}, std::vector<double>{0.5, 0.5}), std::invalid_argument);
    EXPECT_THROW(jsd(LabelDistribution(2), LabelDistribution::from_counts({1, 1})), std::invalid_argument);
}

TEST(DivergenceGain, IdentityWhenDistributionsMatch) {
    const Dataset d = grid_1d(10, 0.5, [](double x) { return x > 0.3 ? 1 : 0; });
    const auto rows = d.all_rows();
    // Left side of 0.55 holds 3 negatives and 2 positives, right side 5 positives.
    const auto l = LabelDistribution::from_counts({3, 2});
    const auto r = LabelDistribution::from_counts({0, 5});
    EXPECT_EQ(divergence_gain(d, rows, 0, 0.5, l, r), 1.0);
    EXPECT_LT(divergence_gain(d, rows, 0, 0.5, r, l), 1.0);
}

TEST(DivergenceGain, WeightedDivergences) {
    // Six rows left, four right; JSDs chosen through the oracle.
    const Dataset d = grid_1d(10, 0.5, [](double x) { return x < 0.3 || x > 0.8 ? 1 : 0; });
    const auto rows = d.all_rows();
    const auto ql = LabelDistribution::from_counts({1, 0});
    const auto qr = LabelDistribution::from_counts({1, 1});
    const double expected = reference::divergence_gain(d, {rows.begin(), rows.end()}, 0, 0.6, {1, 0}, {1, 1});
    EXPECT_NEAR(divergence_gain(d, rows, 0, 0.6, ql, qr), expected, 1e-12);
    // 1 - 0.6 * 0.5 - 0.4 * 0.25 = 0.6 for the stated divergences.
    EXPECT_NEAR(1.0 - 0.6 * 0.5 - 0.4 * 0.25, 0.6, 1e-15);
}

TEST(ThresholdSelection, DegenerateFeatureThrows) {
    Dataset d(numeric_schema(1, 2));
    d.add_row({0.3}, 0);
    d.add_row({0.3}, 1);
    const auto q = LabelDistribution::from_counts({1, 1});
    EXPECT_THROW(threshold_selection(d, d.all_rows(), 0, q, q), std::invalid_argument);
}

TEST(ThresholdSelection, MatchesBruteForce) {
    Rng rng(99);
    for (int i = 0; i < 300; ++i) {
        const auto classes = static_cast<std::size_t>(rft::testing::uniform_int(rng, 2, 3));
        const Dataset d = rft::testing::random_numeric(rng, static_cast<std::size_t>(rft::testing::uniform_int(rng, 2, 30)),
                                                       1, classes, 8);
        const auto rows = d.all_rows();
        const auto ql = rft::testing::random_distribution(rng, classes);
        const auto qr = rft::testing::random_distribution(rng, classes);
        std::vector<double> pl(ql.probs()), pr(qr.probs());
        bool degenerate = true;
        for (auto r : rows) degenerate = degenerate && d.value(r, 0) == d.value(0, 0);
        if (degenerate) continue;
        const auto got = threshold_selection(d, rows, 0, ql, qr);
        const auto want = reference::threshold_search(d, {rows.begin(), rows.end()}, 0, pl, pr);
        EXPECT_EQ(got.threshold, want.threshold);
        EXPECT_NEAR(got.dg, want.dg, 1e-12);
    }
}

TEST(StrutExamples, FirstExampleSourceTree) {
    const Tree src = induce(grid_1d(1000, 0.5, rft::testing::example_one_source));
    ASSERT_EQ(src.root().kind, NodeKind::numeric_split);
    EXPECT_NEAR(src.root().threshold, 0.4, 1e-3);
    EXPECT_NEAR(right_child(src).threshold, 0.7, 1e-3);
}

TEST(StrutExamples, FirstExampleIgOnlyErrsThirtyPercent) {
    const Tree src = induce(grid_1d(1000, 0.5, rft::testing::example_one_source));
    const Dataset target = grid_1d(1000, 0.5, rft::testing::example_one_target);
    const Dataset test = grid_1d(10000, 0.25, rft::testing::example_one_target);
    const Tree ig = strut_tree(src, target, target.all_rows(), {ThresholdCriterion::ig_only});
    EXPECT_NEAR(ig.root().threshold, 0.6, 1e-3);
    EXPECT_NEAR(test_error(ig, test), 0.30, 0.05);
    const Tree full = strut_tree(src, target, target.all_rows());
    EXPECT_EQ(test_error(full, test), 0.0);
}

TEST(StrutExamples, SecondExampleDgOnlyErrsTenPercent) {
    const Tree src = induce(grid_1d(1000, 0.5, rft::testing::example_two_source));
    EXPECT_NEAR(src.root().threshold, 0.5, 1e-3);
    EXPECT_NEAR(right_child(src).threshold, 0.75, 1e-3);
    const Dataset target = grid_1d(1000, 0.5, rft::testing::example_two_target);
    const Dataset test = grid_1d(10000, 0.25, rft::testing::example_two_target);
    const Tree dg = strut_tree(src, target, target.all_rows(), {ThresholdCriterion::dg_only});
    EXPECT_NEAR(dg.root().threshold, 0.5, 1e-3);
    EXPECT_NEAR(right_child(dg).threshold, 0.85, 1e-3);
    EXPECT_NEAR(test_error(dg, test), 0.10, 0.04);
    const Tree full = strut_tree(src, target, target.all_rows());
    EXPECT_NEAR(full.root().threshold, 0.6, 1e-3);
    EXPECT_EQ(test_error(full, test), 0.0);
}

TEST(Strut, UnreachedSubtreeBecomesSourceVoteLeaf) {
    const Tree src = induce(grid_1d(100, 0.5, rft::testing::example_one_source));
    // Target rows only below 0.2: the right subtree is never reached.
    const Dataset target = grid_1d(20, 0.5, [](double) { return 0; });
    Dataset low(numeric_schema(1, 2));
    for (std::size_t i = 0; i < target.size(); ++i) low.add_row({target.value(i, 0) * 0.2}, 0);
    std::vector<NodeId> origin;
    const Tree out = strut_tree(src, low, low.all_rows(), {}, &origin);
    ASSERT_EQ(origin.size(), out.size());
    for (NodeId id = 0; id < static_cast<NodeId>(out.size()); ++id) {
        const Node& n = out.node(id);
        if (n.is_leaf() && !src.node(origin[static_cast<std::size_t>(id)]).is_leaf())
            EXPECT_EQ(n.distribution, src.subtree_distribution(origin[static_cast<std::size_t>(id)]));
    }
}

TEST(Strut, KeepsStructureAndFeatures) {
    Rng rng(31);
    const Schema s = rft::testing::mixed_schema(2);
    for (int i = 0; i < 100; ++i) {
        const Tree src = rft::testing::random_tree(rng, s, 4);
        const Dataset target = rft::testing::random_mixed(rng, 40, 2);
        const auto rows = rft::testing::random_rows(rng, target.size(), 40);
        std::vector<NodeId> origin;
        const Tree out = strut_tree(src, target, rows, {}, &origin);
        EXPECT_LE(out.size(), src.size());
        for (NodeId id = 0; id < static_cast<NodeId>(out.size()); ++id) {
            const Node& n = out.node(id);
            const Node& o = src.node(origin[static_cast<std::size_t>(id)]);
            if (!n.is_leaf()) {
                EXPECT_EQ(n.kind, o.kind);
                EXPECT_EQ(n.feature, o.feature);
            }
        }
    }
}

TEST(Strut, MissingMetadataIsDataError) {
    Tree t;
    Node root;
    root.kind = NodeKind::numeric_split;
    root.feature = 0;
    root.threshold = 0.5;
    root.children = {1, 2};
    t.add(root);
    t.add(Node{.distribution = LabelDistribution::from_counts({1, 0})});
    t.add(Node{.distribution = LabelDistribution::from_counts({0, 1})});
    const Dataset target = grid_1d(10, 0.5, rft::testing::example_one_target);
    EXPECT_THROW(strut_tree(t, target, target.all_rows()), DataError);
}

TEST(Strut, ForestParallelMatchesSerial) {
    Rng rng(8);
    const Dataset src = rft::testing::random_mixed(rng, 300, 2);
    const Dataset tgt = rft::testing::random_mixed(rng, 60, 2);
    InductionConfig cfg;
    cfg.tree_count = 16;
    const Forest f = build_forest(src, cfg);
    const auto rows = tgt.all_rows();
    const Forest serial = strut_forest(f, tgt, rows, {}, 1);
    EXPECT_EQ(strut_forest(f, tgt, rows, {}, 4), serial);
    EXPECT_EQ(serial.provenance, "strut");
    for (std::size_t t = 0; t < f.size(); ++t) EXPECT_EQ(serial.trees[t], strut_tree(f.trees[t], tgt, rows));
}
