#include "rft/dataset.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "rft/error.hpp"

namespace rft {

int Schema::find_feature(std::string_view name) const noexcept {
    for (std::size_t f = 0; f < features.size(); ++f)
        if (features[f].name == name) return static_cast<int>(f);
    return -1;
}

void Schema::check_row(std::span<const double> x) const {
    if (x.size() != features.size())
        throw DataError("feature vector has " + std::to_string(x.size()) + " values, schema expects " +
                        std::to_string(features.size()));
    for (std::size_t f = 0; f < features.size(); ++f) {
        const double v = x[f];
        if (features[f].kind == FeatureKind::numeric) {
            if (!std::isfinite(v)) throw DataError("non-finite value for feature '" + features[f].name + "'");
            continue;
        }
        const auto n = static_cast<double>(features[f].categories.size());
        if (!(v >= 0.0 && v < n) || v != std::floor(v))
            throw DataError("value " + std::to_string(v) + " is not a category of feature '" + features[f].name +
                            "'");
    }
}

Schema numeric_schema(std::size_t features, std::size_t classes) {
    Schema s;
    for (std::size_t f = 0; f < features; ++f) s.features.push_back({"x" + std::to_string(f), FeatureKind::numeric, {}});
    for (std::size_t c = 0; c < classes; ++c) s.classes.push_back(std::to_string(c));
    return s;
}

void Dataset::reserve(std::size_t rows) {
    values_.reserve(rows * schema_.feature_count());
    labels_.reserve(rows);
}

void Dataset::add_row(std::span<const double> x, int label) {
    schema_.check_row(x);
    if (label < 0 || static_cast<std::size_t>(label) >= schema_.class_count())
        throw DataError("label " + std::to_string(label) + " outside [0, " + std::to_string(schema_.class_count()) +
                        ")");
    values_.insert(values_.end(), x.begin(), x.end());
    labels_.push_back(label);
}

std::vector<std::size_t> Dataset::all_rows() const {
    std::vector<std::size_t> rows(size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

LabelDistribution Dataset::distribution(std::span<const std::size_t> rows) const {
    LabelDistribution d(schema_.class_count());
    for (auto r : rows) d.add(labels_[r]);
    return d;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out(schema_);
    out.reserve(rows.size());
    for (auto r : rows) {
        auto x = row(r);
        out.values_.insert(out.values_.end(), x.begin(), x.end());
        out.labels_.push_back(labels_[r]);
    }
    return out;
}

}  // namespace rft
