#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rft {

/// Class histogram backing a label distribution. Probabilities are derived
/// from integer counts, which keeps model files bit-exact on round-trip.
class LabelDistribution {
public:
    LabelDistribution() = default;
    explicit LabelDistribution(std::size_t classes) : counts_(classes, 0) {}

    static LabelDistribution from_counts(std::vector<std::uint64_t> counts);

    void add(int label, std::uint64_t n = 1);
    void merge(const LabelDistribution& other);

    std::size_t classes() const noexcept { return counts_.size(); }
    std::uint64_t count() const noexcept { return total_; }
    std::uint64_t count(int label) const { return counts_.at(static_cast<std::size_t>(label)); }
    bool empty() const noexcept { return total_ == 0; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }

    double prob(int label) const;
    std::vector<double> probs() const;

    /// Most frequent class; ties go to the lowest class id. 0 when empty.
    int argmax() const noexcept;

    /// Samples not of the majority class.
    std::uint64_t minority() const noexcept;

    bool operator==(const LabelDistribution&) const = default;

private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

}  // namespace rft
