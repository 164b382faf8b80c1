#include "rft/strut.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rft/error.hpp"
#include "rft/induction.hpp"
#include "rft/information.hpp"
#include "rft/parallel.hpp"

namespace rft {

double jsd(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("jsd: distribution length mismatch");
    double kl_p = 0.0;
    double kl_q = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        if (p[i] > 0.0) kl_p += p[i] * std::log2(p[i] / m);
        if (q[i] > 0.0) kl_q += q[i] * std::log2(q[i] / m);
    }
    return std::clamp(0.5 * (kl_p + kl_q), 0.0, 1.0);
}

double jsd(const LabelDistribution& p, const LabelDistribution& q) {
    if (p.empty() || q.empty()) throw std::invalid_argument("jsd: empty distribution");
    const auto pp = p.probs();
    const auto qq = q.probs();
    return jsd(pp, qq);
}

namespace {

void fill_probs(std::span<const std::uint64_t> counts, std::uint64_t total, std::vector<double>& out) {
    out.resize(counts.size());
    for (std::size_t c = 0; c < counts.size(); ++c)
        out[c] = static_cast<double>(counts[c]) / static_cast<double>(total);
}

// DG for the split whose left side has `left` counts out of `parent`.
class DivergenceGain {
public:
    DivergenceGain(const LabelDistribution& q_left, const LabelDistribution& q_right)
        : q_left_(q_left.probs()), q_right_(q_right.probs()) {
        if (q_left.empty() || q_right.empty()) throw DataError("model lacks STRUT metadata");
    }

    double operator()(std::span<const std::uint64_t> parent, std::uint64_t parent_total,
                      std::span<const std::uint64_t> left, std::uint64_t left_total) {
        if (parent.size() != q_left_.size() || parent.size() != q_right_.size())
            throw std::invalid_argument("retained distributions do not match the class count");
        right_.resize(parent.size());
        for (std::size_t c = 0; c < parent.size(); ++c) right_[c] = parent[c] - left[c];
        const auto right_total = parent_total - left_total;
        const double n = static_cast<double>(parent_total);
        double dg = 1.0;
        if (left_total > 0) {
            fill_probs(left, left_total, probs_);
            dg -= static_cast<double>(left_total) / n * jsd(probs_, q_left_);
        }
        if (right_total > 0) {
            fill_probs(right_, right_total, probs_);
            dg -= static_cast<double>(right_total) / n * jsd(probs_, q_right_);
        }
        return dg;
    }

private:
    std::vector<double> q_left_;
    std::vector<double> q_right_;
    std::vector<double> probs_;
    std::vector<std::uint64_t> right_;
};

struct Candidate {
    double threshold;
    double ig;
    double dg;
};

std::vector<Candidate> scan_candidates(const Dataset& data, std::span<const std::size_t> rows, int feature,
                                       const LabelDistribution& q_left, const LabelDistribution& q_right) {
    const std::size_t classes = data.schema().class_count();
    std::vector<std::pair<double, int>> sorted;
    sorted.reserve(rows.size());
    LabelDistribution parent(classes);
    for (auto r : rows) {
        sorted.emplace_back(data.value(r, feature), data.label(r));
        parent.add(data.label(r));
    }
    std::sort(sorted.begin(), sorted.end());

    DivergenceGain dg(q_left, q_right);
    std::vector<std::uint64_t> left(classes, 0);
    std::uint64_t left_total = 0;
    std::vector<Candidate> out;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        ++left[static_cast<std::size_t>(sorted[i].second)];
        ++left_total;
        if (!(sorted[i].first < sorted[i + 1].first)) continue;
        out.push_back({midpoint(sorted[i].first, sorted[i + 1].first),
                       split_gain(parent.counts(), parent.count(), left, left_total),
                       dg(parent.counts(), parent.count(), left, left_total)});
    }
    return out;
}

bool has_two_values(const Dataset& data, std::span<const std::size_t> rows, int feature) {
    for (auto r : rows)
        if (data.value(r, feature) != data.value(rows.front(), feature)) return true;
    return false;
}

}  // namespace

double divergence_gain(const Dataset& data, std::span<const std::size_t> rows, int feature, double threshold,
                       const LabelDistribution& q_left, const LabelDistribution& q_right) {
    if (rows.empty()) throw std::invalid_argument("empty sample set");
    if (!data.schema().is_numeric(feature)) throw std::invalid_argument("DG requires a numeric feature");
    LabelDistribution parent(data.schema().class_count());
    LabelDistribution left(data.schema().class_count());
    for (auto r : rows) {
        parent.add(data.label(r));
        if (data.value(r, feature) <= threshold) left.add(data.label(r));
    }
    DivergenceGain dg(q_left, q_right);
    return dg(parent.counts(), parent.count(), left.counts(), left.count());
}

ThresholdSearchResult threshold_selection(const Dataset& data, std::span<const std::size_t> rows, int feature,
                                          const LabelDistribution& q_left, const LabelDistribution& q_right,
                                          ThresholdCriterion criterion) {
    if (rows.empty()) throw std::invalid_argument("empty sample set");
    if (!data.schema().is_numeric(feature)) throw std::invalid_argument("threshold search requires a numeric feature");
    const auto candidates = scan_candidates(data, rows, feature, q_left, q_right);
    if (candidates.empty()) throw std::invalid_argument("degenerate feature");

    const auto n = candidates.size();
    const auto ig_local_max = [&](std::size_t i) {
        const double ig = candidates[i].ig;
        if (i > 0 && ig < candidates[i - 1].ig - gain_tolerance) return false;
        if (i + 1 < n && ig < candidates[i + 1].ig - gain_tolerance) return false;
        return true;
    };

    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
        double score = 0.0;
        switch (criterion) {
            case ThresholdCriterion::ig_and_dg:
                if (!ig_local_max(i)) continue;
                score = candidates[i].dg;
                break;
            case ThresholdCriterion::dg_only:
                score = candidates[i].dg;
                break;
            case ThresholdCriterion::ig_only:
                score = candidates[i].ig;
                break;
        }
        const double best_score = best == n ? 0.0
                                  : criterion == ThresholdCriterion::ig_only ? candidates[best].ig
                                                                             : candidates[best].dg;
        if (best == n || score > best_score + gain_tolerance) best = i;
    }
    // Some candidate is always a local maximum of IG (the global one), so `best` is set.
    return {candidates[best].threshold, candidates[best].dg, candidates[best].ig, n};
}

namespace {

class StrutPass {
public:
    StrutPass(const Tree& source, const Dataset& target, StrutOptions options, std::vector<NodeId>* origin)
        : source_(source), target_(target), options_(options), origin_(origin) {}

    Tree run(std::span<const std::size_t> rows) {
        if (origin_) origin_->clear();
        visit(0, rows);
        return std::move(out_);
    }

private:
    NodeId emit(Node node, NodeId from) {
        if (origin_) origin_->push_back(from);
        return out_.add(std::move(node));
    }

    NodeId visit(NodeId id, std::span<const std::size_t> rows) {
        const Node& src = source_.node(id);
        if (rows.empty()) {
            // Unreachable in the target domain: collapse to the source vote below.
            Node leaf;
            leaf.distribution = source_.subtree_distribution(id);
            return emit(std::move(leaf), id);
        }
        if (src.is_leaf()) {
            Node leaf = src;
            leaf.distribution = target_.distribution(rows);
            return emit(std::move(leaf), id);
        }

        Node copy = src;
        copy.children.clear();
        std::vector<NodeId> order = src.children;
        if (src.kind == NodeKind::numeric_split) {
            if (src.retained_left.empty() || src.retained_right.empty())
                throw DataError("model lacks STRUT metadata");
            if (has_two_values(target_, rows, src.feature)) refit(copy, order, rows);
        }

        std::vector<std::vector<std::size_t>> parts(order.size());
        for (auto r : rows) parts[branch_of(copy, target_.row(r))].push_back(r);
        const NodeId here = emit(std::move(copy), id);
        std::vector<NodeId> children;
        for (std::size_t b = 0; b < order.size(); ++b) children.push_back(visit(order[b], parts[b]));
        out_.node(here).children = std::move(children);
        return here;
    }

    void refit(Node& node, std::vector<NodeId>& order, std::span<const std::size_t> rows) {
        const auto forward = threshold_selection(target_, rows, node.feature, node.retained_left,
                                                 node.retained_right, options_.criterion);
        node.threshold = forward.threshold;
        if (options_.criterion == ThresholdCriterion::ig_only) return;
        const auto reversed = threshold_selection(target_, rows, node.feature, node.retained_right,
                                                  node.retained_left, options_.criterion);
        if (reversed.dg > forward.dg + gain_tolerance) {
            node.threshold = reversed.threshold;
            std::swap(node.retained_left, node.retained_right);
            std::swap(order[0], order[1]);
        }
    }

    const Tree& source_;
    const Dataset& target_;
    StrutOptions options_;
    std::vector<NodeId>* origin_;
    Tree out_;
};

}  // namespace

Tree strut_tree(const Tree& source, const Dataset& target, std::span<const std::size_t> rows, StrutOptions options,
                std::vector<NodeId>* origin) {
    return StrutPass(source, target, options, origin).run(rows);
}

Forest strut_forest(const Forest& forest, const Dataset& target, std::span<const std::size_t> rows,
                    StrutOptions options, int workers) {
    check_compatible(forest.schema, target.schema());
    Forest out;
    out.schema = forest.schema;
    out.trees.resize(forest.size());
    out.weights = uniform_weights(forest.size());
    out.provenance = "strut";
    parallel_for(forest.size(), workers,
                 [&](std::size_t t) { out.trees[t] = strut_tree(forest.trees[t], target, rows, options); });
    return out;
}

Forest strut_forest(const Forest& forest, const Dataset& target, int workers) {
    const auto rows = target.all_rows();
    return strut_forest(forest, target, rows, {}, workers);
}

}  // namespace rft
