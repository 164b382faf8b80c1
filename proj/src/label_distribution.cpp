#include "rft/label_distribution.hpp"

#include <numeric>
#include <stdexcept>

namespace rft {

LabelDistribution LabelDistribution::from_counts(std::vector<std::uint64_t> counts) {
    LabelDistribution d;
    d.total_ = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    d.counts_ = std::move(counts);
    return d;
}

void LabelDistribution::add(int label, std::uint64_t n) {
    counts_.at(static_cast<std::size_t>(label)) += n;
    total_ += n;
}

void LabelDistribution::merge(const LabelDistribution& other) {
    if (counts_.empty()) counts_.assign(other.classes(), 0);
    if (other.classes() != classes()) throw std::invalid_argument("label distribution class count mismatch");
    for (std::size_t c = 0; c < counts_.size(); ++c) counts_[c] += other.counts_[c];
    total_ += other.total_;
}

double LabelDistribution::prob(int label) const {
    if (total_ == 0) return 0.0;
    return static_cast<double>(count(label)) / static_cast<double>(total_);
}

std::vector<double> LabelDistribution::probs() const {
    std::vector<double> p(counts_.size(), 0.0);
    if (total_ == 0) return p;
    for (std::size_t c = 0; c < counts_.size(); ++c)
        p[c] = static_cast<double>(counts_[c]) / static_cast<double>(total_);
    return p;
}

int LabelDistribution::argmax() const noexcept {
    int best = 0;
    for (std::size_t c = 1; c < counts_.size(); ++c)
        if (counts_[c] > counts_[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    return best;
}

std::uint64_t LabelDistribution::minority() const noexcept {
    if (counts_.empty()) return 0;
    return total_ - counts_[static_cast<std::size_t>(argmax())];
}

}  // namespace rft
