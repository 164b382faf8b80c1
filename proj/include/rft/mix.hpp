#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rft/dataset.hpp"
#include "rft/forest.hpp"

namespace rft {

/// Union of both tree lists under a uniform vote.
Forest mix(const Forest& a, const Forest& b);

struct EnsembleDiagnostics {
    double gibbs_risk = 0.0;
    double bayes_risk = 0.0;
    double disagreement_dq = 0.0;
    double joint_error_eq = 0.0;
    std::optional<double> c_bound;       // undefined when gibbs_risk >= 0.5
    std::optional<double> simple_bound;  // 1 / (n (1 - 2 gibbs)^2)
    std::size_t voters = 0;
    std::size_t samples = 0;
};

struct DiagnosticsOptions {
    // Use the true-class versus best-rival margin for more than two classes.
    // Without it, non-binary schemas are rejected.
    bool multiclass = false;
};

double gibbs_risk(const Forest& forest, const Dataset& data, int workers = 1);
double bayes_risk(const Forest& forest, const Dataset& data, int workers = 1);
double disagreement(const Forest& forest, const Dataset& data, int workers = 1);
double joint_error(const Forest& forest, const Dataset& data, int workers = 1);

EnsembleDiagnostics diagnose(const Forest& forest, const Dataset& data, DiagnosticsOptions options = {},
                             int workers = 1);

/// 1 - (1 - 2 R_G)^2 / (1 - 2 d_Q); empty when R_G >= 0.5 or d_Q >= 0.5.
std::optional<double> c_bound(double gibbs, double disagreement_dq);
/// Same bound in terms of the expected joint error.
std::optional<double> c_bound_joint(double joint_error_eq, double disagreement_dq);
std::optional<double> c_bound(const EnsembleDiagnostics& d);

nlohmann::json to_json(const EnsembleDiagnostics& d);

/// Vote share of the true class minus the largest rival share, per row.
std::vector<double> margins(const Forest& forest, const Dataset& data, int workers = 1);

/// Rows where the majority votes of `a` and `b` differ.
std::vector<bool> disagreement_mask(const Forest& a, const Forest& b, const Dataset& data, int workers = 1);

/// Empirical CDF of margins at every distinct margin: (margin, fraction <= margin).
/// `mask`, when given, selects the rows taken into account.
std::vector<std::pair<double, double>> margin_cdf(std::span<const double> margins,
                                                  const std::vector<bool>* mask = nullptr);

void write_margin_cdf_csv(std::ostream& out, std::span<const std::pair<double, double>> cdf);

}  // namespace rft
