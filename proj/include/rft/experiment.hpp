#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rft/challenges.hpp"
#include "rft/csv.hpp"
#include "rft/induction.hpp"
#include "rft/mix.hpp"
#include "rft/sampling.hpp"

namespace rft {

enum class Algorithm { src_only, tgt_only, relabel, bias, prune, ser, strut, mix };

inline constexpr std::array all_algorithms{Algorithm::src_only, Algorithm::tgt_only, Algorithm::relabel,
                                           Algorithm::bias,     Algorithm::prune,    Algorithm::ser,
                                           Algorithm::strut,    Algorithm::mix};

std::string_view name(Algorithm a) noexcept;
Algorithm parse_algorithm(std::string_view name);

enum class Metric { error, ber };
std::string_view name(Metric m) noexcept;
Metric parse_metric(std::string_view name);

enum class ExperimentMode { synth, csv };

struct CsvExperiment {
    // Either two files (source_path + target_path) or one file split by `split`.
    std::filesystem::path source_path;
    std::filesystem::path target_path;
    std::optional<SplitRule> split;
    CsvOptions csv;
};

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::synth;
    synth::ChallengeSpec challenge;
    CsvExperiment data;
    double target_fraction = 0.05;
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::vector<Algorithm> algorithms{Algorithm::ser, Algorithm::strut, Algorithm::mix};
    Metric metric = Metric::error;
    int workers = 1;
    InductionConfig induction;
    bool diagnostics = false;  // binary problems only
};

void validate(const ExperimentConfig& config);

struct AlgorithmResult {
    Algorithm algorithm = Algorithm::ser;
    std::vector<double> per_trial;  // metric per trial
    double mean = 0.0;
    double std_error = 0.0;  // standard error of the mean over trials
    double mean_transfer_ms = 0.0;
    std::optional<EnsembleDiagnostics> diagnostics;  // averaged over trials
};

struct TransferReport {
    std::string title;
    Metric metric = Metric::error;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<AlgorithmResult> results;

    const AlgorithmResult& at(Algorithm a) const;
};

/// Runs every trial: source forest, target train/test slices, each selected
/// algorithm, metric on the target test slice. Trials run on
/// `config.workers` threads and are merged by trial index.
TransferReport run_experiment(const ExperimentConfig& config);

/// Deterministic part of the report (no timings).
nlohmann::json to_json(const TransferReport& report);
/// Per-algorithm mean transfer times.
nlohmann::json timings_json(const TransferReport& report);
std::string format_table(const TransferReport& report);
std::string results_csv(const TransferReport& report);

}  // namespace rft
