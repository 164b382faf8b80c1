#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rft/baselines.hpp"
#include "rft/challenges.hpp"
#include "rft/csv.hpp"
#include "rft/error.hpp"
#include "rft/experiment.hpp"
#include "rft/induction.hpp"
#include "rft/mix.hpp"
#include "rft/sampling.hpp"
#include "rft/ser.hpp"
#include "rft/serialization.hpp"
#include "rft/strut.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rft;

namespace {

enum Exit { ok = 0, usage = 1, data = 2 };

struct Common {
    int trees = 50;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string metric = "error";
    std::string label;
    std::vector<std::string> categorical;
};

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

CsvOptions csv_options(const Common& c) {
    CsvOptions o;
    o.label_column = c.label;
    o.categorical_columns = c.categorical;
    return o;
}

CsvOptions reference_options(const Forest& model) {
    CsvOptions o;
    o.reference = model.schema;
    return o;
}

InductionConfig induction(const Common& c) {
    InductionConfig cfg;
    cfg.tree_count = c.trees;
    cfg.seed = c.seed;
    return cfg;
}

json metrics_json(const Forest& model, const Dataset& data, int workers) {
    const auto predictions = predict_all(model, data, workers);
    const auto b = balanced_error(predictions, data.labels(), data.schema().class_count());
    json absent = json::array();
    for (int c : b.absent_classes) absent.push_back(data.schema().classes[static_cast<std::size_t>(c)]);
    return {{"samples", data.size()},
            {"error", error_rate(predictions, data.labels())},
            {"ber", b.value},
            {"ber_absent_classes", absent}};
}

void emit_report(const TransferReport& report, const std::optional<fs::path>& out) {
    std::cout << format_table(report);
    if (!out) return;
    write_text(*out / "report.json", to_json(report).dump(2) + "\n");
    write_text(*out / "timings.json", timings_json(report).dump(2) + "\n");
    write_text(*out / "results.csv", results_csv(report));
}

void add_common(CLI::App* cmd, Common& c, bool with_trees) {
    cmd->add_option("--seed", c.seed, "random seed");
    cmd->add_option("--workers", c.workers, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    if (with_trees) cmd->add_option("--trees", c.trees, "trees per forest")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decision-forest model transfer: train, adapt, evaluate, benchmark"};
    app.require_subcommand(1);
    Common c;

    // train
    auto* train = app.add_subcommand("train", "fit a forest on a CSV file");
    std::string train_data;
    fs::path train_out;
    train->add_option("--data", train_data, "training CSV")->required();
    train->add_option("--label", c.label, "label column")->required();
    train->add_option("--categorical", c.categorical, "categorical columns")->delimiter(',');
    train->add_option("--out", train_out, "model file")->required();
    add_common(train, c, true);

    // transfer
    auto* transfer = app.add_subcommand("transfer", "adapt a model to target data");
    fs::path model_path, target_path, transfer_out;
    std::string algo = "ser";
    transfer->add_option("--model", model_path, "source model file")->required();
    transfer->add_option("--target", target_path, "labeled target CSV")->required();
    transfer->add_option("--algo", algo, "ser|strut|mix|relabel|bias|prune|src_only|tgt_only");
    transfer->add_option("--out", transfer_out, "adapted model file")->required();
    add_common(transfer, c, true);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "error and BER of a model on a CSV file");
    fs::path eval_model, eval_data;
    std::optional<fs::path> eval_out;
    evaluate->add_option("--model", eval_model, "model file")->required();
    evaluate->add_option("--data", eval_data, "labeled CSV")->required();
    evaluate->add_option("--out", eval_out, "output directory");
    add_common(evaluate, c, false);

    // diagnostics
    auto* diagnostics = app.add_subcommand("diagnostics", "PAC-Bayes quantities and margin CDFs of one or two models");
    std::vector<fs::path> diag_models;
    fs::path diag_data;
    bool multiclass = false;
    std::optional<fs::path> diag_out;
    diagnostics->add_option("--model", diag_models, "model file (give twice to compare)")->required()->expected(1, 2);
    diagnostics->add_option("--data", diag_data, "labeled CSV")->required();
    diagnostics->add_flag("--multiclass", multiclass, "true-class vs best-rival margin for > 2 classes");
    diagnostics->add_option("--out", diag_out, "output directory");
    add_common(diagnostics, c, false);

    // synth-bench
    auto* synth_bench = app.add_subcommand("synth-bench", "transfer benchmark on a synthetic challenge");
    std::string challenge = "moving";
    std::size_t trials = 100;
    std::vector<std::string> algos{"ser", "strut", "mix"};
    std::optional<fs::path> bench_out;
    bool with_diagnostics = false;
    synth::ChallengeSpec spec;
    synth_bench->add_option("--challenge", challenge, "challenge name or 'all'");
    synth_bench->add_option("--trials", trials, "trials")->check(CLI::PositiveNumber);
    synth_bench->add_option("--algos", algos, "algorithms")->delimiter(',');
    synth_bench->add_option("--source-size", spec.source_size)->check(CLI::PositiveNumber);
    synth_bench->add_option("--target-size", spec.target_size)->check(CLI::PositiveNumber);
    synth_bench->add_option("--test-size", spec.test_size)->check(CLI::PositiveNumber);
    synth_bench->add_flag("--diagnostics", with_diagnostics, "add ensemble diagnostics to the report");
    synth_bench->add_option("--out", bench_out, "output directory");
    add_common(synth_bench, c, true);

    // csv-bench
    auto* csv_bench = app.add_subcommand("csv-bench", "transfer benchmark on CSV data");
    fs::path source_csv, target_csv;
    std::string split_feature, split_category, split_mode = "median";
    double split_threshold = 0.0;
    double fraction = 0.05;
    csv_bench->add_option("--source", source_csv, "source CSV, or the whole dataset with --split-feature")->required();
    csv_bench->add_option("--target", target_csv, "target CSV");
    csv_bench->add_option("--label", c.label, "label column")->required();
    csv_bench->add_option("--categorical", c.categorical, "categorical columns")->delimiter(',');
    csv_bench->add_option("--split-feature", split_feature, "feature that partitions source and target");
    csv_bench->add_option("--split-category", split_category, "category sent to the target side");
    csv_bench->add_option("--split-mode", split_mode, "numeric split: median|per-class-median|value")
        ->check(CLI::IsMember({"median", "per-class-median", "value"}));
    csv_bench->add_option("--split-threshold", split_threshold, "threshold for --split-mode value");
    csv_bench->add_option("--target-fraction", fraction, "labeled share of the target domain");
    csv_bench->add_option("--trials", trials)->check(CLI::PositiveNumber);
    csv_bench->add_option("--algos", algos)->delimiter(',');
    csv_bench->add_option("--metric", c.metric, "error|ber");
    csv_bench->add_flag("--diagnostics", with_diagnostics);
    csv_bench->add_option("--out", bench_out, "output directory");
    add_common(csv_bench, c, true);

    // synth-export
    auto* synth_export = app.add_subcommand("synth-export", "write one synthetic trial as CSV files");
    std::size_t trial = 0;
    fs::path export_out;
    synth_export->add_option("--challenge", challenge)->required();
    synth_export->add_option("--trial", trial);
    synth_export->add_option("--out", export_out, "output directory")->required();
    synth_export->add_option("--seed", c.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*train) {
            const Dataset d = load_csv(train_data, csv_options(c));
            save_forest(build_forest(d, induction(c), c.workers), train_out);
        } else if (*transfer) {
            const Forest model = load_forest(model_path);
            const Dataset target = load_csv(target_path, reference_options(model));
            const auto rows = target.all_rows();
            const InductionConfig cfg = induction(c);
            Forest out;
            switch (parse_algorithm(algo)) {
                case Algorithm::ser: out = ser_forest(model, target, rows, cfg, c.workers); break;
                case Algorithm::strut: out = strut_forest(model, target, rows, {}, c.workers); break;
                case Algorithm::mix:
                    out = mix(ser_forest(model, target, rows, cfg, c.workers),
                              strut_forest(model, target, rows, {}, c.workers));
                    break;
                case Algorithm::relabel: out = relabel(model, target, rows, c.workers); break;
                case Algorithm::bias: out = bias(model, target, rows, BiasScheme::accuracy, c.workers); break;
                case Algorithm::prune: out = prune(model, target, rows, c.workers); break;
                case Algorithm::src_only: out = src_only(model); break;
                case Algorithm::tgt_only: out = tgt_only(target, rows, cfg, c.workers); break;
            }
            save_forest(out, transfer_out);
        } else if (*evaluate) {
            const Forest model = load_forest(eval_model);
            const Dataset d = load_csv(eval_data, reference_options(model));
            const std::string text = metrics_json(model, d, c.workers).dump(2) + "\n";
            std::cout << text;
            if (eval_out) write_text(*eval_out / "metrics.json", text);
        } else if (*diagnostics) {
            std::vector<Forest> models;
            for (const auto& p : diag_models) models.push_back(load_forest(p));
            const Dataset d = load_csv(diag_data, reference_options(models.front()));
            const DiagnosticsOptions options{multiclass};
            json report = json::array();
            std::vector<std::vector<double>> m;
            for (std::size_t i = 0; i < models.size(); ++i) {
                json entry = to_json(diagnose(models[i], d, options, c.workers));
                entry["model"] = diag_models[i].filename().string();
                report.push_back(std::move(entry));
                m.push_back(margins(models[i], d, c.workers));
            }
            std::optional<std::vector<bool>> mask;
            if (models.size() == 2) mask = disagreement_mask(models[0], models[1], d, c.workers);
            const std::string text = report.dump(2) + "\n";
            std::cout << text;
            if (diag_out) {
                write_text(*diag_out / "diagnostics.json", text);
                for (std::size_t i = 0; i < models.size(); ++i) {
                    std::ostringstream csv;
                    write_margin_cdf_csv(csv, margin_cdf(m[i], mask ? &*mask : nullptr));
                    write_text(*diag_out / ("margin_cdf_" + std::to_string(i) + ".csv"), csv.str());
                }
            }
        } else if (*synth_bench || *csv_bench) {
            ExperimentConfig cfg;
            cfg.trials = trials;
            cfg.seed = c.seed;
            cfg.workers = c.workers;
            cfg.induction = induction(c);
            cfg.metric = parse_metric(c.metric);
            cfg.diagnostics = with_diagnostics;
            cfg.algorithms.clear();
            for (const auto& a : algos) cfg.algorithms.push_back(parse_algorithm(a));
            if (*synth_bench) {
                cfg.mode = ExperimentMode::synth;
                spec.trials = trials;
                std::vector<synth::Challenge> run;
                if (challenge == "all")
                    run.assign(synth::all_challenges.begin(), synth::all_challenges.end());
                else
                    run.push_back(synth::parse_challenge(challenge));
                for (auto ch : run) {
                    cfg.challenge = spec;
                    cfg.challenge.challenge = ch;
                    std::optional<fs::path> dir = bench_out;
                    if (dir && run.size() > 1) *dir /= std::string(synth::name(ch));
                    emit_report(run_experiment(cfg), dir);
                }
            } else {
                cfg.mode = ExperimentMode::csv;
                cfg.target_fraction = fraction;
                cfg.data.source_path = source_csv;
                cfg.data.target_path = target_csv;
                cfg.data.csv = csv_options(c);
                if (!split_feature.empty()) {
                    SplitRule rule;
                    rule.feature = split_feature;
                    rule.category = split_category;
                    rule.threshold = split_threshold;
                    rule.statistic = split_mode == "value"              ? SplitStatistic::value
                                     : split_mode == "per-class-median" ? SplitStatistic::per_class_median
                                                                        : SplitStatistic::median;
                    cfg.data.split = rule;
                }
                emit_report(run_experiment(cfg), bench_out);
            }
        } else if (*synth_export) {
            synth::ChallengeSpec s;
            s.challenge = synth::parse_challenge(challenge);
            s.seed = c.seed;
            const auto inst = synth::generate(s, trial);
            const auto dump = [&](const Dataset& d, const char* file) {
                std::ostringstream csv;
                write_csv(csv, d);
                write_text(export_out / file, csv.str());
            };
            dump(inst.source_train, "source.csv");
            dump(inst.target_train, "target_train.csv");
            dump(inst.target_test, "target_test.csv");
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return data;
    }
    return ok;
}
