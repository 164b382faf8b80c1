#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rft/dataset.hpp"
#include "rft/forest.hpp"
#include "rft/label_distribution.hpp"
#include "rft/tree.hpp"

namespace rft {

/// Jensen-Shannon divergence in bits, in [0, 1].
double jsd(std::span<const double> p, std::span<const double> q);
double jsd(const LabelDistribution& p, const LabelDistribution& q);

/// 1 - |S_L|/|S| JSD(Q'_L, Q_L) - |S_R|/|S| JSD(Q'_R, Q_R), where Q' are the
/// label distributions induced on `rows` by `x[feature] <= threshold`.
double divergence_gain(const Dataset& data, std::span<const std::size_t> rows, int feature, double threshold,
                       const LabelDistribution& q_left, const LabelDistribution& q_right);

enum class ThresholdCriterion {
    ig_and_dg,  // maximize DG over local maxima of IG
    ig_only,
    dg_only,
};

struct ThresholdSearchResult {
    double threshold = 0.0;
    double dg = 0.0;
    double ig = 0.0;
    std::size_t candidates_considered = 0;
};

/// Comparison slack for IG and DG values during threshold search.
inline constexpr double gain_tolerance = 1e-12;

/// Line search over midpoints of consecutive distinct values of `feature`
/// in `rows`. Throws std::invalid_argument("degenerate feature") when fewer
/// than two distinct values are present.
ThresholdSearchResult threshold_selection(const Dataset& data, std::span<const std::size_t> rows, int feature,
                                          const LabelDistribution& q_left, const LabelDistribution& q_right,
                                          ThresholdCriterion criterion = ThresholdCriterion::ig_and_dg);

struct StrutOptions {
    ThresholdCriterion criterion = ThresholdCriterion::ig_and_dg;
};

/// Threshold refitting of one tree on target rows. `origin`, when given,
/// receives for each output node the id of the source node it came from.
Tree strut_tree(const Tree& source, const Dataset& target, std::span<const std::size_t> rows,
                StrutOptions options = {}, std::vector<NodeId>* origin = nullptr);

Forest strut_forest(const Forest& forest, const Dataset& target, std::span<const std::size_t> rows,
                    StrutOptions options = {}, int workers = 1);
Forest strut_forest(const Forest& forest, const Dataset& target, int workers = 1);

}  // namespace rft
