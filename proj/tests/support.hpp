#pragma once

// Independent oracles and fixture generators shared by the unit and
// acceptance tests. Nothing here calls the kernels it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "rft/dataset.hpp"
#include "rft/forest.hpp"
#include "rft/induction.hpp"
#include "rft/random.hpp"
#include "rft/tree.hpp"

namespace rft::reference {

inline double log2_safe(double p) { return p > 0.0 ? std::log2(p) : 0.0; }

inline double entropy(const std::vector<double>& counts) {
    double n = 0.0;
    for (double c : counts) n += c;
    double h = 0.0;
    for (double c : counts) h -= c / n * log2_safe(c / n);
    return h;
}

inline std::vector<double> histogram(const Dataset& d, const std::vector<std::size_t>& rows) {
    std::vector<double> h(d.schema().class_count());
    for (auto i : rows) h[static_cast<std::size_t>(d.label(i))] += 1.0;
    return h;
}

// Information gain computed from counts on both sides, directly from the definition.
inline double information_gain(const Dataset& d, const std::vector<std::size_t>& rows, int f, double t) {
    std::vector<std::size_t> left, right;
    for (auto i : rows) (d.value(i, f) <= t ? left : right).push_back(i);
    const double n = static_cast<double>(rows.size());
    double ig = entropy(histogram(d, rows));
    if (!left.empty()) ig -= left.size() / n * entropy(histogram(d, left));
    if (!right.empty()) ig -= right.size() / n * entropy(histogram(d, right));
    return ig;
}

inline double kl(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) s += p[i] * std::log2(p[i] / q[i]);
    return s;
}

inline double jsd(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> m(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m[i] = (p[i] + q[i]) / 2;
    return kl(p, m) / 2 + kl(q, m) / 2;
}

inline std::vector<double> normalized(std::vector<double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    for (double& x : v) x /= s;
    return v;
}

inline double divergence_gain(const Dataset& d, const std::vector<std::size_t>& rows, int f, double t,
                              const std::vector<double>& q_left, const std::vector<double>& q_right) {
    std::vector<std::size_t> left, right;
    for (auto i : rows) (d.value(i, f) <= t ? left : right).push_back(i);
    const double n = static_cast<double>(rows.size());
    double dg = 1.0;
    if (!left.empty()) dg -= left.size() / n * jsd(normalized(histogram(d, left)), normalized(q_left));
    if (!right.empty()) dg -= right.size() / n * jsd(normalized(histogram(d, right)), normalized(q_right));
    return dg;
}

struct BruteThreshold {
    double threshold;
    double dg;
};

// Exhaustive version of the STRUT threshold rule: every midpoint, keep those
// whose IG is a local maximum, take the best DG, smaller threshold on ties.
inline BruteThreshold threshold_search(const Dataset& d, const std::vector<std::size_t>& rows, int f,
                                       const std::vector<double>& q_left, const std::vector<double>& q_right,
                                       double tol = 1e-12) {
    std::set<double> distinct;
    for (auto i : rows) distinct.insert(d.value(i, f));
    std::vector<double> v(distinct.begin(), distinct.end());
    std::vector<double> mids, ig, dg;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const double m = rft::midpoint(v[k], v[k + 1]);
        mids.push_back(m);
        ig.push_back(information_gain(d, rows, f, m));
        dg.push_back(divergence_gain(d, rows, f, m, q_left, q_right));
    }
    std::optional<BruteThreshold> best;
    for (std::size_t k = 0; k < mids.size(); ++k) {
        const bool left_ok = k == 0 || ig[k] >= ig[k - 1] - tol;
        const bool right_ok = k + 1 == mids.size() || ig[k] >= ig[k + 1] - tol;
        if (!left_ok || !right_ok) continue;
        if (!best || dg[k] > best->dg + tol) best = BruteThreshold{mids[k], dg[k]};
    }
    return *best;
}

// Serial forest vote, written independently of predict().
inline int vote(const Forest& f, std::span<const double> x) {
    std::vector<double> score(f.schema.class_count());
    for (std::size_t t = 0; t < f.trees.size(); ++t) {
        const Tree& tree = f.trees[t];
        NodeId id = 0;
        while (!tree.node(id).is_leaf()) {
            const Node& n = tree.node(id);
            const double v = x[static_cast<std::size_t>(n.feature)];
            const std::size_t b = n.kind == NodeKind::numeric_split ? (v <= n.threshold ? 0 : 1)
                                                                     : static_cast<std::size_t>(v);
            id = n.children[b];
        }
        const auto& dist = tree.node(id).distribution;
        int best = 0;
        for (int c = 1; c < static_cast<int>(dist.classes()); ++c)
            if (dist.count(c) > dist.count(best)) best = c;
        score[static_cast<std::size_t>(best)] += f.weights[t];
    }
    return static_cast<int>(std::max_element(score.begin(), score.end()) - score.begin());
}

}  // namespace rft::reference

namespace rft::testing {

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Numeric features whose values come from a small grid, so ties occur.
inline Dataset random_numeric(Rng& rng, std::size_t rows, std::size_t features, std::size_t classes,
                              int grid = 10) {
    Dataset d(numeric_schema(features, classes));
    std::vector<double> x(features);
    for (std::size_t i = 0; i < rows; ++i) {
        for (auto& v : x) v = uniform_int(rng, 0, grid - 1) / static_cast<double>(grid);
        d.add_row(x, uniform_int(rng, 0, static_cast<int>(classes) - 1));
    }
    return d;
}

// Two numeric features plus one categorical feature with three values.
inline Schema mixed_schema(std::size_t classes) {
    Schema s = numeric_schema(2, classes);
    s.features.push_back({"color", FeatureKind::categorical, {"red", "green", "blue"}});
    return s;
}

inline Dataset random_mixed(Rng& rng, std::size_t rows, std::size_t classes) {
    Dataset d(mixed_schema(classes));
    for (std::size_t i = 0; i < rows; ++i) {
        const double x[3] = {uniform_int(rng, 0, 9) / 10.0, uniform(rng), static_cast<double>(uniform_int(rng, 0, 2))};
        // Labels depend on the features so trees are non-trivial.
        int y = (x[0] + x[1] > 1.0) ? 1 : 0;
        if (x[2] == 2.0) y = 1 - y;
        if (uniform(rng) < 0.15) y = uniform_int(rng, 0, static_cast<int>(classes) - 1);
        d.add_row(std::span<const double>(x, 3), y % static_cast<int>(classes));
    }
    return d;
}

inline LabelDistribution random_distribution(Rng& rng, std::size_t classes, bool allow_empty = false) {
    LabelDistribution d(classes);
    const int n = uniform_int(rng, allow_empty ? 0 : 1, 12);
    for (int i = 0; i < n; ++i) d.add(uniform_int(rng, 0, static_cast<int>(classes) - 1));
    return d;
}

// Random structurally valid tree over `schema`; children always get larger ids.
inline Tree random_tree(Rng& rng, const Schema& schema, int max_depth) {
    Tree t;
    t.add(Node{});
    std::vector<std::pair<NodeId, int>> open{{0, 0}};
    while (!open.empty()) {
        const auto [id, depth] = open.back();
        open.pop_back();
        Node n;
        if (depth < max_depth && uniform(rng) < 0.7) {
            n.feature = uniform_int(rng, 0, static_cast<int>(schema.feature_count()) - 1);
            const auto& spec = schema.features[static_cast<std::size_t>(n.feature)];
            std::size_t arity = 2;
            if (spec.kind == FeatureKind::numeric) {
                n.kind = NodeKind::numeric_split;
                n.threshold = uniform(rng);
                n.retained_left = random_distribution(rng, schema.class_count());
                n.retained_right = random_distribution(rng, schema.class_count());
            } else {
                n.kind = NodeKind::categorical_split;
                arity = spec.categories.size();
            }
            t.node(id) = n;
            for (std::size_t b = 0; b < arity; ++b) {
                const NodeId child = t.add(Node{});
                t.node(id).children.push_back(child);
                open.emplace_back(child, depth + 1);
            }
        } else {
            n.distribution = random_distribution(rng, schema.class_count());
            t.node(id) = n;
        }
    }
    return t;
}

inline Forest random_forest(Rng& rng, const Schema& schema, int trees, int max_depth) {
    Forest f;
    f.schema = schema;
    for (int i = 0; i < trees; ++i) f.trees.push_back(random_tree(rng, schema, max_depth));
    std::vector<double> w(f.trees.size());
    double sum = 0.0;
    for (auto& x : w) sum += (x = uniform(rng, 0.1, 1.0));
    for (auto& x : w) x /= sum;
    f.weights = w;
    f.provenance = "random";
    return f;
}

inline std::vector<std::size_t> random_rows(Rng& rng, std::size_t n, std::size_t max_take) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min<std::size_t>(n, static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(max_take)))));
    std::sort(all.begin(), all.end());
    return all;
}

// True iff one literal sequence is a prefix of the other.
inline bool prefix_comparable(const std::vector<Literal>& a, const std::vector<Literal>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    return std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n), b.begin());
}

// Output paths with no prefix-comparable source path.
inline std::size_t containment_violations(const Tree& source, const Tree& out) {
    const auto src = root_to_leaf_paths(source);
    std::size_t bad = 0;
    for (const auto& p : root_to_leaf_paths(out))
        if (std::none_of(src.begin(), src.end(), [&](const auto& s) { return prefix_comparable(p, s); })) ++bad;
    return bad;
}

// One-feature sample on a regular grid of [0, 1]: x_i = (i + offset) / n.
template <typename Label>
Dataset grid_1d(std::size_t n, double offset, Label label) {
    Dataset d(numeric_schema(1, 2));
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) + offset) / static_cast<double>(n);
        d.add_row({x}, label(x));
    }
    return d;
}

// Class 1 stands for +1, class 0 for -1.
inline int example_one_source(double x) { return 0.4 < x && x < 0.7 ? 1 : 0; }
inline int example_one_target(double x) { return 0.3 < x && x < 0.6 ? 1 : 0; }
inline int example_two_source(double x) { return x < 0.5 || x >= 0.75 ? 1 : 0; }
inline int example_two_target(double x) { return x < 0.6 || x >= 0.85 ? 1 : 0; }

inline double test_error(const Tree& t, const Dataset& d) {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < d.size(); ++i) wrong += t.predict(d.row(i)) != d.label(i);
    return static_cast<double>(wrong) / static_cast<double>(d.size());
}

}  // namespace rft::testing
