#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rft/dataset.hpp"
#include "rft/random.hpp"

namespace rft {

struct TrainTestSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Per-class proportional sample of round(fraction * n_c) rows, at least one
/// per class present; every other row goes to the test side.
TrainTestSplit stratified_sample(const Dataset& data, double fraction, Rng& rng);

enum class SplitStatistic {
    value,           // threshold given explicitly
    median,          // median of the feature over all rows
    per_class_median // median within each class
};

struct SplitRule {
    std::string feature;
    // Categorical: rows with this category go to the target side.
    std::string category;
    // Numeric: rows above the threshold go to the target side.
    SplitStatistic statistic = SplitStatistic::median;
    double threshold = 0.0;
};

struct DomainSplit {
    Dataset source;
    Dataset target;
};

/// Partitions rows by one feature and drops that feature from both sides.
DomainSplit split_by_feature(const Dataset& data, const SplitRule& rule);

/// Fraction of mismatches.
double error_rate(std::span<const int> predictions, std::span<const int> labels);

struct BalancedError {
    double value = 0.0;
    std::vector<int> absent_classes;  // classes with no labels, left out of the mean
};

BalancedError balanced_error(std::span<const int> predictions, std::span<const int> labels, std::size_t classes);

/// Mean of per-class error fractions over classes present in `labels`.
/// Prints a warning to std::clog for absent classes.
double balanced_error_rate(std::span<const int> predictions, std::span<const int> labels, std::size_t classes);

}  // namespace rft
