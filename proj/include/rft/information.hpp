#pragma once

#include <cstdint>
#include <span>

#include "rft/dataset.hpp"
#include "rft/label_distribution.hpp"

namespace rft {

/// Shannon entropy in bits; 0 log 0 = 0. Throws on an all-zero vector.
double entropy(std::span<const double> probs);
double entropy(const LabelDistribution& dist);

/// Entropy of a class histogram with the given total (bits).
double entropy_of_counts(std::span<const std::uint64_t> counts, std::uint64_t total) noexcept;

/// Gain of splitting `parent` into `left` and `parent - left`, from counts.
double split_gain(std::span<const std::uint64_t> parent, std::uint64_t parent_total,
                  std::span<const std::uint64_t> left, std::uint64_t left_total);

/// Information gain of the split `x[feature] <= threshold` over `rows`.
double information_gain(const Dataset& data, std::span<const std::size_t> rows, int feature,
                        double threshold);

}  // namespace rft
