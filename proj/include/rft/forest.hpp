#pragma once

#include <span>
#include <string>
#include <vector>

#include "rft/dataset.hpp"
#include "rft/tree.hpp"

namespace rft {

/// Weighted ensemble of trees sharing one schema. Weights sum to 1.
struct Forest {
    Schema schema;
    std::vector<Tree> trees;
    std::vector<double> weights;
    std::string provenance;

    std::size_t size() const noexcept { return trees.size(); }
    bool operator==(const Forest&) const = default;
};

std::vector<double> uniform_weights(std::size_t n);

/// Throws DataError if any tree references a feature, category or class the
/// schema does not define, if weights do not match the trees, or if a
/// numeric split lacks retained distributions.
void validate(const Forest& forest);

/// Throws DataError unless `data` has the model's features and classes.
void check_compatible(const Schema& model, const Schema& data);

struct Prediction {
    int label = 0;
    std::vector<double> scores;  // weighted vote share per class
};

/// Weighted majority vote of the trees' leaf argmax labels; ties go to the
/// lowest class id.
Prediction predict(const Forest& forest, std::span<const double> x);

/// Hard predictions for every row, evaluated on `workers` threads.
std::vector<int> predict_all(const Forest& forest, const Dataset& data, int workers = 1);

/// Per-row, per-tree votes: votes[row * trees + t].
std::vector<int> tree_votes(const Forest& forest, const Dataset& data, int workers = 1);

}  // namespace rft
