#include "rft/mix.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "rft/error.hpp"
#include "rft/parallel.hpp"

namespace rft {

Forest mix(const Forest& a, const Forest& b) {
    if (!(a.schema == b.schema)) throw DataError("cannot mix forests with different schemas");
    Forest out;
    out.schema = a.schema;
    out.trees.reserve(a.size() + b.size());
    out.trees.insert(out.trees.end(), a.trees.begin(), a.trees.end());
    out.trees.insert(out.trees.end(), b.trees.begin(), b.trees.end());
    out.weights = uniform_weights(out.trees.size());
    out.provenance = "mix";
    return out;
}

namespace {

struct PointStats {
    double wrong = 0.0;     // Q-mass of trees that err
    double disagree = 0.0;  // P(f1(x) != f2(x)) for independent f1, f2 ~ Q
    double margin = 0.0;    // true-class share minus best rival share
};

// Vote shares per row, normalized by the total weight.
std::vector<PointStats> point_stats(const Forest& forest, const Dataset& data, int workers) {
    check_compatible(forest.schema, data.schema());
    if (forest.trees.empty()) throw std::invalid_argument("diagnostics need at least one tree");
    const auto votes = tree_votes(forest, data, workers);
    const std::size_t n_trees = forest.size();
    const std::size_t classes = forest.schema.class_count();
    double total = 0.0;
    for (double w : forest.weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("forest weights sum to zero");

    std::vector<PointStats> out(data.size());
    parallel_for(data.size(), workers, [&](std::size_t i) {
        std::vector<double> share(classes, 0.0);
        for (std::size_t t = 0; t < n_trees; ++t)
            share[static_cast<std::size_t>(votes[i * n_trees + t])] += forest.weights[t];
        for (auto& s : share) s /= total;
        const auto y = static_cast<std::size_t>(data.label(i));
        PointStats p;
        double rival = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
            p.disagree += share[c] * (1.0 - share[c]);
            if (c == y) continue;
            p.wrong += share[c];
            rival = std::max(rival, share[c]);
        }
        p.margin = share[y] - rival;
        out[i] = p;
    });
    return out;
}

void require_binary(const Forest& forest, DiagnosticsOptions options) {
    if (forest.schema.class_count() != 2 && !options.multiclass)
        throw std::invalid_argument("ensemble diagnostics are defined for binary problems; enable multiclass margins");
}

}  // namespace

EnsembleDiagnostics diagnose(const Forest& forest, const Dataset& data, DiagnosticsOptions options, int workers) {
    require_binary(forest, options);
    const auto points = point_stats(forest, data, workers);
    EnsembleDiagnostics d;
    d.voters = forest.size();
    d.samples = points.size();
    if (points.empty()) return d;
    for (const auto& p : points) {
        d.gibbs_risk += p.wrong;
        d.joint_error_eq += p.wrong * p.wrong;
        d.disagreement_dq += p.disagree;
        if (p.margin <= 0.0) d.bayes_risk += 1.0;
    }
    const double n = static_cast<double>(points.size());
    d.gibbs_risk /= n;
    d.joint_error_eq /= n;
    d.disagreement_dq /= n;
    d.bayes_risk /= n;
    d.c_bound = c_bound(d.gibbs_risk, d.disagreement_dq);
    if (d.gibbs_risk < 0.5) {
        const double edge = 1.0 - 2.0 * d.gibbs_risk;
        d.simple_bound = 1.0 / (static_cast<double>(d.voters) * edge * edge);
    }
    return d;
}

double gibbs_risk(const Forest& forest, const Dataset& data, int workers) {
    return diagnose(forest, data, {.multiclass = true}, workers).gibbs_risk;
}
double bayes_risk(const Forest& forest, const Dataset& data, int workers) {
    return diagnose(forest, data, {.multiclass = true}, workers).bayes_risk;
}
double disagreement(const Forest& forest, const Dataset& data, int workers) {
    return diagnose(forest, data, {.multiclass = true}, workers).disagreement_dq;
}
double joint_error(const Forest& forest, const Dataset& data, int workers) {
    return diagnose(forest, data, {.multiclass = true}, workers).joint_error_eq;
}

std::optional<double> c_bound(double gibbs, double disagreement_dq) {
    if (gibbs >= 0.5 || disagreement_dq >= 0.5) return std::nullopt;
    const double edge = 1.0 - 2.0 * gibbs;
    return 1.0 - edge * edge / (1.0 - 2.0 * disagreement_dq);
}

std::optional<double> c_bound_joint(double joint_error_eq, double disagreement_dq) {
    const double edge = 1.0 - 2.0 * joint_error_eq - disagreement_dq;
    if (edge <= 0.0 || disagreement_dq >= 0.5) return std::nullopt;
    return 1.0 - edge * edge / (1.0 - 2.0 * disagreement_dq);
}

std::optional<double> c_bound(const EnsembleDiagnostics& d) { return c_bound(d.gibbs_risk, d.disagreement_dq); }

nlohmann::json to_json(const EnsembleDiagnostics& d) {
    const auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    return nlohmann::json{{"gibbs_risk", d.gibbs_risk},
                          {"bayes_risk", d.bayes_risk},
                          {"disagreement_dq", d.disagreement_dq},
                          {"joint_error_eq", d.joint_error_eq},
                          {"c_bound", opt(d.c_bound)},
                          {"simple_bound", opt(d.simple_bound)},
                          {"voters", d.voters},
                          {"samples", d.samples}};
}

std::vector<double> margins(const Forest& forest, const Dataset& data, int workers) {
    const auto points = point_stats(forest, data, workers);
    std::vector<double> out(points.size());
    std::transform(points.begin(), points.end(), out.begin(), [](const PointStats& p) { return p.margin; });
    return out;
}

std::vector<bool> disagreement_mask(const Forest& a, const Forest& b, const Dataset& data, int workers) {
    const auto pa = predict_all(a, data, workers);
    const auto pb = predict_all(b, data, workers);
    std::vector<bool> mask(data.size());
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = pa[i] != pb[i];
    return mask;
}

std::vector<std::pair<double, double>> margin_cdf(std::span<const double> values, const std::vector<bool>* mask) {
    if (mask && mask->size() != values.size()) throw std::invalid_argument("mask length differs from margins");
    std::vector<double> kept;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!mask || (*mask)[i]) kept.push_back(values[i]);
    std::sort(kept.begin(), kept.end());
    std::vector<std::pair<double, double>> cdf;
    const double n = static_cast<double>(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i)
        if (i + 1 == kept.size() || kept[i + 1] != kept[i]) cdf.emplace_back(kept[i], static_cast<double>(i + 1) / n);
    return cdf;
}

void write_margin_cdf_csv(std::ostream& out, std::span<const std::pair<double, double>> cdf) {
    out << "margin,cum_fraction\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& [m, f] : cdf) out << m << ',' << f << '\n';
}

}  // namespace rft
