#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rft/label_distribution.hpp"

namespace rft {

enum class FeatureKind { numeric, categorical };

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::numeric;
    std::vector<std::string> categories;  // categorical only; value i encodes categories[i]

    bool operator==(const FeatureSpec&) const = default;
};

struct Schema {
    std::vector<FeatureSpec> features;
    std::vector<std::string> classes;
    std::string label_name = "label";

    std::size_t feature_count() const noexcept { return features.size(); }
    std::size_t class_count() const noexcept { return classes.size(); }
    bool is_numeric(int feature) const { return features.at(static_cast<std::size_t>(feature)).kind == FeatureKind::numeric; }

    /// Index of the named feature, or -1.
    int find_feature(std::string_view name) const noexcept;

    /// Throws DataError unless `x` is a valid feature vector under this schema.
    void check_row(std::span<const double> x) const;

    bool operator==(const Schema&) const = default;
};

/// `features` numeric columns named x0, x1, ... and classes "0", "1", ...
Schema numeric_schema(std::size_t features, std::size_t classes);

/// Row-major sample table. Categorical cells hold the category index as a double.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(Schema schema) : schema_(std::move(schema)) {}

    void reserve(std::size_t rows);
    void add_row(std::span<const double> x, int label);
    void add_row(std::initializer_list<double> x, int label) { add_row(std::span<const double>(x.begin(), x.size()), label); }

    const Schema& schema() const noexcept { return schema_; }
    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    std::size_t feature_count() const noexcept { return schema_.feature_count(); }

    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * schema_.feature_count(), schema_.feature_count()};
    }
    double value(std::size_t i, int feature) const noexcept {
        return values_[i * schema_.feature_count() + static_cast<std::size_t>(feature)];
    }
    int label(std::size_t i) const noexcept { return labels_[i]; }
    std::span<const int> labels() const noexcept { return labels_; }

    std::vector<std::size_t> all_rows() const;
    LabelDistribution distribution(std::span<const std::size_t> rows) const;
    Dataset subset(std::span<const std::size_t> rows) const;

private:
    Schema schema_;
    std::vector<double> values_;
    std::vector<int> labels_;
};

}  // namespace rft
