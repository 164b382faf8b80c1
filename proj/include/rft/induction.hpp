#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "rft/dataset.hpp"
#include "rft/forest.hpp"
#include "rft/random.hpp"
#include "rft/tree.hpp"

namespace rft {

enum class FeatureSubsample {
    log2,  // ceil(log2(r)) features, at least 1
    sqrt,  // ceil(sqrt(r))
    all,
};

struct InductionConfig {
    int tree_count = 50;
    FeatureSubsample feature_subsample = FeatureSubsample::log2;
    int min_samples_split = 2;
    std::optional<int> max_depth;
    std::uint64_t seed = 0;
    bool bootstrap = false;
};

/// Candidate features drawn per split for `features` columns.
std::size_t subsample_size(FeatureSubsample rule, std::size_t features);

/// Split point strictly between two distinct sorted values: lo <= t < hi.
double midpoint(double lo, double hi) noexcept;

/// Greedy information-gain tree. Numeric splits retain the label
/// distributions of both sides; leaves hold the empirical distribution.
Tree build_tree(const Dataset& data, std::span<const std::size_t> rows, const InductionConfig& config,
                Rng& rng);

/// `config.tree_count` trees, tree t seeded by derive_seed(config.seed, t).
Forest build_forest(const Dataset& data, std::span<const std::size_t> rows, const InductionConfig& config,
                    int workers = 1);
Forest build_forest(const Dataset& data, const InductionConfig& config, int workers = 1);

}  // namespace rft
