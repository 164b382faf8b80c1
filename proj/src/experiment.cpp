#include "rft/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "rft/baselines.hpp"
#include "rft/error.hpp"
#include "rft/parallel.hpp"
#include "rft/ser.hpp"
#include "rft/strut.hpp"

namespace rft {

namespace {

constexpr std::array<std::string_view, 8> algorithm_names{"src_only", "tgt_only", "relabel", "bias",
                                                          "prune",    "ser",      "strut",   "mix"};

// Seed streams under a trial seed.
enum Stream : std::uint64_t { source_forest = 1, target_sample = 2, ser_stream = 3, tgt_stream = 4 };

struct Domains {
    Dataset source;
    Dataset target;  // csv mode: sampled each trial
};

struct TrialOutcome {
    std::vector<double> metric;
    std::vector<double> ms;
    std::vector<std::optional<EnsembleDiagnostics>> diagnostics;
};

double millis_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

class Trial {
public:
    Trial(const ExperimentConfig& config, const Dataset& source, const Dataset& target_train,
          const Dataset& target_test, std::uint64_t seed, int workers)
        : config_(config), source_(source), train_(target_train), test_(target_test), seed_(seed),
          workers_(workers) {}

    TrialOutcome run() {
        InductionConfig induction = config_.induction;
        induction.seed = derive_seed(seed_, source_forest);
        forest_ = build_forest(source_, induction, workers_);
        rows_ = train_.all_rows();

        TrialOutcome out;
        for (Algorithm a : config_.algorithms) {
            const auto start = std::chrono::steady_clock::now();
            Forest model = transfer(a);
            out.ms.push_back(a == Algorithm::mix ? ser_ms_ + strut_ms_ + millis_since(start) : millis_since(start));
            const auto predictions = predict_all(model, test_, workers_);
            const auto labels = test_.labels();
            out.metric.push_back(config_.metric == Metric::error
                                     ? error_rate(predictions, labels)
                                     : balanced_error(predictions, labels, test_.schema().class_count()).value);
            if (config_.diagnostics && test_.schema().class_count() == 2)
                out.diagnostics.push_back(diagnose(model, test_, {}, workers_));
            else
                out.diagnostics.emplace_back();
        }
        return out;
    }

private:
    Forest transfer(Algorithm a) {
        switch (a) {
            case Algorithm::src_only: return src_only(forest_);
            case Algorithm::tgt_only: {
                InductionConfig c = config_.induction;
                c.seed = derive_seed(seed_, tgt_stream);
                return tgt_only(train_, rows_, c, workers_);
            }
            case Algorithm::relabel: return relabel(forest_, train_, rows_, workers_);
            case Algorithm::bias: return bias(forest_, train_, rows_, BiasScheme::accuracy, workers_);
            case Algorithm::prune: return prune(forest_, train_, rows_, workers_);
            case Algorithm::ser: return ser();
            case Algorithm::strut: return strut();
            case Algorithm::mix: return mix(ser(), strut());
        }
        throw ConfigError("unknown algorithm");
    }

    // SER and STRUT are computed once per trial and shared with MIX.
    const Forest& ser() {
        if (!ser_) {
            const auto start = std::chrono::steady_clock::now();
            InductionConfig c = config_.induction;
            c.seed = derive_seed(seed_, ser_stream);
            ser_ = ser_forest(forest_, train_, rows_, c, workers_);
            ser_ms_ = millis_since(start);
        }
        return *ser_;
    }

    const Forest& strut() {
        if (!strut_) {
            const auto start = std::chrono::steady_clock::now();
            strut_ = strut_forest(forest_, train_, rows_, {}, workers_);
            strut_ms_ = millis_since(start);
        }
        return *strut_;
    }

    const ExperimentConfig& config_;
    const Dataset& source_;
    const Dataset& train_;
    const Dataset& test_;
    std::uint64_t seed_;
    int workers_;
    Forest forest_;
    std::vector<std::size_t> rows_;
    std::optional<Forest> ser_;
    std::optional<Forest> strut_;
    double ser_ms_ = 0.0;
    double strut_ms_ = 0.0;
};

Domains load_domains(const CsvExperiment& data) {
    if (data.split) {
        const Dataset all = load_csv(data.source_path, data.csv);
        auto split = split_by_feature(all, *data.split);
        return {std::move(split.source), std::move(split.target)};
    }
    Dataset source = load_csv(data.source_path, data.csv);
    CsvOptions target_options = data.csv;
    target_options.reference = source.schema();
    Dataset target = load_csv(data.target_path, target_options);
    return {std::move(source), std::move(target)};
}

EnsembleDiagnostics average(const std::vector<EnsembleDiagnostics>& all) {
    EnsembleDiagnostics m;
    const auto n = static_cast<double>(all.size());
    for (const auto& d : all) {
        m.gibbs_risk += d.gibbs_risk / n;
        m.bayes_risk += d.bayes_risk / n;
        m.disagreement_dq += d.disagreement_dq / n;
        m.joint_error_eq += d.joint_error_eq / n;
        m.samples += d.samples;
        m.voters = std::max(m.voters, d.voters);
    }
    m.samples /= all.size();
    m.c_bound = c_bound(m.gibbs_risk, m.disagreement_dq);
    if (m.gibbs_risk < 0.5)
        m.simple_bound = 1.0 / (static_cast<double>(m.voters) * std::pow(1.0 - 2.0 * m.gibbs_risk, 2));
    return m;
}

}  // namespace

std::string_view name(Algorithm a) noexcept { return algorithm_names[static_cast<std::size_t>(a)]; }

Algorithm parse_algorithm(std::string_view text) {
    for (Algorithm a : all_algorithms)
        if (name(a) == text) return a;
    if (text == "src") return Algorithm::src_only;
    if (text == "tgt") return Algorithm::tgt_only;
    throw ConfigError("unknown algorithm '" + std::string(text) + "'");
}

std::string_view name(Metric m) noexcept { return m == Metric::error ? "error" : "ber"; }

Metric parse_metric(std::string_view text) {
    if (text == "error") return Metric::error;
    if (text == "ber") return Metric::ber;
    throw ConfigError("unknown metric '" + std::string(text) + "'");
}

void validate(const ExperimentConfig& config) {
    if (config.trials == 0) throw ConfigError("trials must be positive");
    if (config.algorithms.empty()) throw ConfigError("no algorithms selected");
    if (config.induction.tree_count <= 0) throw ConfigError("tree count must be positive");
    if (config.induction.min_samples_split < 2) throw ConfigError("min samples per split must be at least 2");
    if (config.induction.max_depth && *config.induction.max_depth < 0) throw ConfigError("max depth must be >= 0");
    if (config.mode == ExperimentMode::synth) {
        const auto& c = config.challenge;
        if (c.source_size == 0 || c.target_size == 0 || c.test_size == 0)
            throw ConfigError("challenge sample sizes must be positive");
    } else {
        if (!(config.target_fraction > 0.0 && config.target_fraction < 1.0))
            throw ConfigError("target fraction must lie in (0, 1)");
        if (config.data.source_path.empty()) throw ConfigError("no source CSV given");
        if (!config.data.split && config.data.target_path.empty())
            throw ConfigError("need a target CSV or a split rule");
    }
}

const AlgorithmResult& TransferReport::at(Algorithm a) const {
    for (const auto& r : results)
        if (r.algorithm == a) return r;
    throw std::out_of_range("algorithm not in report: " + std::string(name(a)));
}

TransferReport run_experiment(const ExperimentConfig& config) {
    validate(config);

    std::optional<Domains> domains;
    if (config.mode == ExperimentMode::csv) domains = load_domains(config.data);

    const std::size_t trials = config.trials;
    const int outer = trials > 1 ? config.workers : 1;
    const int inner = trials > 1 ? 1 : config.workers;
    std::vector<TrialOutcome> outcomes(trials);

    parallel_for(trials, outer, [&](std::size_t t) {
        const std::uint64_t trial_seed = derive_seed(config.seed, t);
        if (config.mode == ExperimentMode::synth) {
            synth::ChallengeSpec spec = config.challenge;
            spec.seed = config.seed;
            const auto inst = synth::generate(spec, t);
            outcomes[t] = Trial(config, inst.source_train, inst.target_train, inst.target_test, trial_seed, inner).run();
            return;
        }
        Rng rng(derive_seed(trial_seed, target_sample));
        const auto split = stratified_sample(domains->target, config.target_fraction, rng);
        const Dataset train = domains->target.subset(split.train);
        const Dataset test = domains->target.subset(split.test);
        outcomes[t] = Trial(config, domains->source, train, test, trial_seed, inner).run();
    });

    TransferReport report;
    report.metric = config.metric;
    report.trials = trials;
    report.seed = config.seed;
    report.title = config.mode == ExperimentMode::synth
                       ? std::string(synth::name(config.challenge.challenge))
                       : config.data.source_path.filename().string();
    const auto n = static_cast<double>(trials);
    for (std::size_t k = 0; k < config.algorithms.size(); ++k) {
        AlgorithmResult r;
        r.algorithm = config.algorithms[k];
        std::vector<EnsembleDiagnostics> diags;
        for (const auto& o : outcomes) {
            r.per_trial.push_back(o.metric[k]);
            r.mean_transfer_ms += o.ms[k] / n;
            if (o.diagnostics[k]) diags.push_back(*o.diagnostics[k]);
        }
        r.mean = std::accumulate(r.per_trial.begin(), r.per_trial.end(), 0.0) / n;
        if (trials > 1) {
            double ss = 0.0;
            for (double v : r.per_trial) ss += (v - r.mean) * (v - r.mean);
            r.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
        if (!diags.empty()) r.diagnostics = average(diags);
        report.results.push_back(std::move(r));
    }
    return report;
}

nlohmann::json to_json(const TransferReport& report) {
    nlohmann::json results = nlohmann::json::array();
    for (const auto& r : report.results) {
        nlohmann::json entry{{"algorithm", name(r.algorithm)},
                             {"mean", r.mean},
                             {"std_error", r.std_error},
                             {"per_trial", r.per_trial}};
        if (r.diagnostics) entry["diagnostics"] = to_json(*r.diagnostics);
        results.push_back(std::move(entry));
    }
    return {{"title", report.title},
            {"metric", name(report.metric)},
            {"trials", report.trials},
            {"seed", report.seed},
            {"results", std::move(results)}};
}

nlohmann::json timings_json(const TransferReport& report) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& r : report.results) out[std::string(name(r.algorithm))] = {{"mean_transfer_ms", r.mean_transfer_ms}};
    return out;
}

std::string format_table(const TransferReport& report) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%s  (%s, %zu trials)\n", report.title.c_str(),
                  std::string(name(report.metric)).c_str(), report.trials);
    out << line;
    std::snprintf(line, sizeof line, "%-10s %9s %9s %12s\n", "algorithm", "mean %", "stderr", "transfer ms");
    out << line;
    for (const auto& r : report.results) {
        std::snprintf(line, sizeof line, "%-10s %9.2f %9.2f %12.2f\n", std::string(name(r.algorithm)).c_str(),
                      100.0 * r.mean, 100.0 * r.std_error, r.mean_transfer_ms);
        out << line;
    }
    return out.str();
}

std::string results_csv(const TransferReport& report) {
    std::ostringstream out;
    out << "algorithm,mean,std_error,mean_transfer_ms\n";
    out.precision(17);
    for (const auto& r : report.results)
        out << name(r.algorithm) << ',' << r.mean << ',' << r.std_error << ',' << r.mean_transfer_ms << '\n';
    return out.str();
}

}  // namespace rft
