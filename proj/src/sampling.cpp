#include "rft/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "rft/error.hpp"

namespace rft {

TrainTestSplit stratified_sample(const Dataset& data, double fraction, Rng& rng) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("target fraction must lie in (0, 1]");
    if (data.empty()) throw DataError("cannot sample from an empty dataset");

    std::vector<std::vector<std::size_t>> by_class(data.schema().class_count());
    for (std::size_t i = 0; i < data.size(); ++i) by_class[static_cast<std::size_t>(data.label(i))].push_back(i);

    TrainTestSplit split;
    for (auto& rows : by_class) {
        if (rows.empty()) continue;
        std::shuffle(rows.begin(), rows.end(), rng);
        const auto want = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(rows.size())));
        const std::size_t k = std::clamp<std::size_t>(want, 1, rows.size());
        split.train.insert(split.train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(k));
        split.test.insert(split.test.end(), rows.begin() + static_cast<std::ptrdiff_t>(k), rows.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

DomainSplit split_by_feature(const Dataset& data, const SplitRule& rule) {
    const Schema& schema = data.schema();
    const int feature = schema.find_feature(rule.feature);
    if (feature < 0) throw ConfigError("unknown split feature '" + rule.feature + "'");
    if (data.empty()) throw DataError("cannot split an empty dataset");

    std::vector<bool> to_target(data.size());
    const auto& spec = schema.features[static_cast<std::size_t>(feature)];
    if (spec.kind == FeatureKind::categorical) {
        const auto it = std::find(spec.categories.begin(), spec.categories.end(), rule.category);
        if (it == spec.categories.end())
            throw ConfigError("feature '" + rule.feature + "' has no category '" + rule.category + "'");
        const auto code = static_cast<double>(it - spec.categories.begin());
        for (std::size_t i = 0; i < data.size(); ++i) to_target[i] = data.value(i, feature) == code;
    } else if (rule.statistic == SplitStatistic::per_class_median) {
        std::vector<std::vector<double>> per_class(schema.class_count());
        for (std::size_t i = 0; i < data.size(); ++i)
            per_class[static_cast<std::size_t>(data.label(i))].push_back(data.value(i, feature));
        std::vector<double> cut(per_class.size());
        for (std::size_t c = 0; c < per_class.size(); ++c)
            if (!per_class[c].empty()) cut[c] = median_of(per_class[c]);
        for (std::size_t i = 0; i < data.size(); ++i)
            to_target[i] = data.value(i, feature) > cut[static_cast<std::size_t>(data.label(i))];
    } else {
        double threshold = rule.threshold;
        if (rule.statistic == SplitStatistic::median) {
            std::vector<double> v(data.size());
            for (std::size_t i = 0; i < data.size(); ++i) v[i] = data.value(i, feature);
            threshold = median_of(std::move(v));
        }
        for (std::size_t i = 0; i < data.size(); ++i) to_target[i] = data.value(i, feature) > threshold;
    }

    Schema reduced = schema;
    reduced.features.erase(reduced.features.begin() + feature);
    DomainSplit out{Dataset(reduced), Dataset(reduced)};
    std::vector<double> x;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto row = data.row(i);
        x.assign(row.begin(), row.end());
        x.erase(x.begin() + feature);
        (to_target[i] ? out.target : out.source).add_row(x, data.label(i));
    }
    if (out.source.empty() || out.target.empty())
        throw DataError("split on '" + rule.feature + "' leaves one domain empty");
    return out;
}

double error_rate(std::span<const int> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size()) throw std::invalid_argument("prediction and label counts differ");
    if (labels.empty()) throw std::invalid_argument("error rate of no samples");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) wrong += predictions[i] != labels[i];
    return static_cast<double>(wrong) / static_cast<double>(labels.size());
}

BalancedError balanced_error(std::span<const int> predictions, std::span<const int> labels, std::size_t classes) {
    if (predictions.size() != labels.size()) throw std::invalid_argument("prediction and label counts differ");
    std::vector<std::size_t> seen(classes), wrong(classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto y = static_cast<std::size_t>(labels[i]);
        if (y >= classes) throw std::invalid_argument("label out of range");
        ++seen[y];
        wrong[y] += predictions[i] != labels[i];
    }
    BalancedError out;
    double sum = 0.0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < classes; ++c) {
        if (seen[c] == 0) {
            out.absent_classes.push_back(static_cast<int>(c));
            continue;
        }
        sum += static_cast<double>(wrong[c]) / static_cast<double>(seen[c]);
        ++present;
    }
    if (present == 0) throw std::invalid_argument("balanced error of no samples");
    out.value = sum / static_cast<double>(present);
    return out;
}

double balanced_error_rate(std::span<const int> predictions, std::span<const int> labels, std::size_t classes) {
    const auto r = balanced_error(predictions, labels, classes);
    if (!r.absent_classes.empty()) {
        std::clog << "warning: balanced error ignores classes absent from the labels:";
        for (int c : r.absent_classes) std::clog << ' ' << c;
        std::clog << '\n';
    }
    return r.value;
}

}  // namespace rft
