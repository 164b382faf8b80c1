#pragma once

#include <span>

#include "rft/dataset.hpp"
#include "rft/forest.hpp"
#include "rft/induction.hpp"

namespace rft {

Forest src_only(const Forest& source);

/// Fresh forest on target rows only.
Forest tgt_only(const Dataset& target, std::span<const std::size_t> rows, const InductionConfig& config,
                int workers = 1);

/// Every leaf reached by target rows takes their empirical distribution.
Forest relabel(const Forest& forest, const Dataset& target, std::span<const std::size_t> rows, int workers = 1);

enum class BiasScheme {
    accuracy,  // w ∝ max(accuracy, 1e-6)
    softmax,   // w ∝ exp(-error / temperature), temperature 0.1
};

/// Reweights trees toward those with lower error on target rows.
Forest bias(const Forest& forest, const Dataset& target, std::span<const std::size_t> rows,
            BiasScheme scheme = BiasScheme::accuracy, int workers = 1);

/// SER's reduction step alone: bottom-up collapse of subtrees whose
/// majority leaf errs strictly less on the target rows.
Forest prune(const Forest& forest, const Dataset& target, std::span<const std::size_t> rows, int workers = 1);

}  // namespace rft
