// Copyright 2026 The qforecast Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: generate, inspect, run, report.

#include "qforecast/data.hpp"
#include "qforecast/errors.hpp"
#include "qforecast/harness.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace qforecast;

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_generate(std::uint64_t seed, const std::string &out) {
    SyntheticConfig cfg;
    cfg.seed = seed;
    const Dataset d = generate_synthetic(cfg);
    write_csv(d, out);
    std::printf("wrote %zu months x %zu features to %s (exploding column: %s)\n",
                d.rows(), d.columns(), out.c_str(),
                d.feature_names[static_cast<std::size_t>(exploding_column(cfg))].c_str());
    return 0;
}

int cmd_inspect(const std::string &path, std::size_t train_months) {
    const Dataset d = load_csv(path);
    const Dataset complete = drop_missing_features(d);
    std::printf("months: %zu (%s .. %s)\n", d.rows(), to_string(d.months.front()).c_str(),
                to_string(d.months.back()).c_str());
    std::printf("features: %zu\n", d.columns());
    std::printf("columns with missing values: %zu\n", d.columns() - complete.columns());
    for (std::size_t c = 0; c < d.columns(); ++c) {
        const auto n = d.missing.col(static_cast<Eigen::Index>(c)).count();
        if (n > 0) {
            std::printf("  %s (%ld missing)\n", d.feature_names[c].c_str(),
                        static_cast<long>(n));
        }
    }
    std::printf("complete features: %zu\n", complete.columns());
    if (train_months >= d.rows() || train_months < 2) {
        throw ConfigError("--train-months must be in [2, rows)");
    }
    const auto split = chronological_split(complete, train_months);
    const auto cum = cumulative_variance(fit_pca(split.first.features));
    std::printf("PCA on the first %zu months\ncomponents,cumulative_variance\n",
                train_months);
    for (std::size_t k = 0; k < cum.size(); ++k) {
        std::printf("%zu,%.4f\n", k + 1, 100.0 * cum[k]);
    }
    return 0;
}

struct RunOverrides {
    std::string data, plan, out;
    std::vector<std::string> models;
    std::vector<int> features, layers;
    int runs = 0, epochs = 0;
    std::uint64_t base_seed = 0;
    bool has_seed = false, quiet = false;
};

int cmd_run(const RunOverrides &o) {
    ExperimentPlan plan = o.plan.empty() ? ExperimentPlan{} : plan_from_json(slurp(o.plan));
    if (!o.models.empty()) plan.models = o.models;
    if (!o.features.empty()) plan.feature_counts = o.features;
    if (!o.layers.empty()) plan.layer_counts = o.layers;
    if (o.runs != 0) plan.runs_per_cell = o.runs;
    if (o.epochs != 0) plan.epochs = o.epochs;
    if (o.has_seed) plan.base_seed = o.base_seed;
    const Dataset d = load_csv(o.data);

    ProgressFn progress;
    if (!o.quiet) {
        progress = [](const CellKey &key, int run, const RunResult *r,
                      const std::string &error) {
            if (r != nullptr) {
                std::fprintf(stderr, "%s run %d: train MAE %.4f -> %.4f (%.1fs)\n",
                             key.id().c_str(), run, r->initial_train_mae,
                             r->train_mae.back(), r->wall_seconds);
            } else {
                std::fprintf(stderr, "%s run %d FAILED: %s\n", key.id().c_str(),
                             run, error.c_str());
            }
        };
    }
    const ExperimentResult result = run_experiment(plan, d, progress);
    emit_report(result, o.out);
    int failed = 0;
    for (const auto &cell : result.cells) {
        if (!cell.ok()) {
            ++failed;
            std::fprintf(stderr, "cell %s failed: %s\n", cell.key.id().c_str(),
                         cell.error.c_str());
        }
    }
    std::printf("%zu cells written to %s\n", result.cells.size(), o.out.c_str());
    return failed == 0 ? 0 : kExitRuntime;
}

int cmd_report(const std::string &results, const std::string &out) {
    const ExperimentResult r = load_results(results);
    emit_report(r, out);
    std::printf("%zu cells written to %s\n", r.cells.size(), out.c_str());
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum neural network demand-forecasting experiments"};
    app.require_subcommand(1);

    auto *gen = app.add_subcommand("generate", "Write a synthetic monthly dataset");
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    gen->add_option("--seed", gen_seed, "Generator seed")->default_val(0);
    gen->add_option("--out", gen_out, "Output CSV")->required();

    auto *ins = app.add_subcommand("inspect", "Summarize a dataset and its PCA spectrum");
    std::string ins_data;
    std::size_t ins_train = 40;
    ins->add_option("--data", ins_data, "Input CSV")->required();
    ins->add_option("--train-months", ins_train, "Months used to fit the PCA")
        ->default_val(40);

    auto *run = app.add_subcommand("run", "Run an experiment grid");
    RunOverrides ro;
    run->add_option("--data", ro.data, "Input CSV")->required();
    run->add_option("--plan", ro.plan, "Plan JSON (fields of the experiment plan)");
    run->add_option("--out", ro.out, "Results directory")->required();
    run->add_option("--models", ro.models, "e.g. qnn,rnn128")->delimiter(',');
    run->add_option("--features", ro.features, "e.g. 4,8,19")->delimiter(',');
    run->add_option("--layers", ro.layers, "e.g. 1,3,5")->delimiter(',');
    run->add_option("--runs", ro.runs, "Runs per cell");
    run->add_option("--epochs", ro.epochs, "Training epochs");
    auto *seed_opt = run->add_option("--base-seed", ro.base_seed, "Base seed");
    run->add_flag("--quiet", ro.quiet, "No per-run progress");

    auto *rep = app.add_subcommand("report", "Regenerate reports from persisted runs");
    std::string rep_in, rep_out;
    rep->add_option("--results", rep_in, "Results directory")->required();
    rep->add_option("--out", rep_out, "Report directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (gen->parsed()) {
            return cmd_generate(gen_seed, gen_out);
        }
        if (ins->parsed()) {
            return cmd_inspect(ins_data, ins_train);
        }
        if (run->parsed()) {
            ro.has_seed = seed_opt->count() > 0;
            if (run->count("--runs") > 0 && ro.runs < 1) {
                throw ConfigError("--runs must be >= 1");
            }
            if (run->count("--epochs") > 0 && ro.epochs < 1) {
                throw ConfigError("--epochs must be >= 1");
            }
            return cmd_run(ro);
        }
        return cmd_report(rep_in, rep_out);
    } catch (const ParseError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const ValidationError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
