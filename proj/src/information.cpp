#include "rft/information.hpp"

#include <cmath>
#include <stdexcept>

namespace rft {

double entropy(std::span<const double> probs) {
    double total = 0.0;
    for (double p : probs) total += p;
    if (total <= 0.0) throw std::invalid_argument("empty distribution");
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

double entropy(const LabelDistribution& dist) {
    if (dist.empty()) throw std::invalid_argument("empty distribution");
    return entropy_of_counts(dist.counts(), dist.count());
}

double entropy_of_counts(std::span<const std::uint64_t> counts, std::uint64_t total) noexcept {
    if (total == 0) return 0.0;
    const double n = static_cast<double>(total);
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

namespace {

double right_entropy(std::span<const std::uint64_t> parent, std::span<const std::uint64_t> left,
                     std::uint64_t right_total) noexcept {
    if (right_total == 0) return 0.0;
    const double n = static_cast<double>(right_total);
    double h = 0.0;
    for (std::size_t c = 0; c < parent.size(); ++c) {
        const auto r = parent[c] - left[c];
        if (r == 0) continue;
        const double p = static_cast<double>(r) / n;
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

double split_gain(std::span<const std::uint64_t> parent, std::uint64_t parent_total,
                  std::span<const std::uint64_t> left, std::uint64_t left_total) {
    if (parent_total == 0) throw std::invalid_argument("empty sample set");
    const auto right_total = parent_total - left_total;
    const double n = static_cast<double>(parent_total);
    const double gain = entropy_of_counts(parent, parent_total) -
                        static_cast<double>(left_total) / n * entropy_of_counts(left, left_total) -
                        static_cast<double>(right_total) / n * right_entropy(parent, left, right_total);
    return gain > 0.0 ? gain : 0.0;
}

double information_gain(const Dataset& data, std::span<const std::size_t> rows, int feature, double threshold) {
    if (rows.empty()) throw std::invalid_argument("empty sample set");
    if (!data.schema().is_numeric(feature))
        throw std::invalid_argument("IG threshold form requires numeric feature");
    LabelDistribution parent(data.schema().class_count());
    LabelDistribution left(data.schema().class_count());
    for (auto r : rows) {
        parent.add(data.label(r));
        if (data.value(r, feature) <= threshold) left.add(data.label(r));
    }
    return split_gain(parent.counts(), parent.count(), left.counts(), left.count());
}

}  // namespace rft
