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

/**
 * @file
 * Experiment grid, monthly report tables and result persistence.
 */
#pragma once

#include "qforecast/circuit.hpp"
#include "qforecast/pipeline.hpp"
#include "qforecast/run_result.hpp"

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qforecast {

struct ExperimentPlan {
    std::vector<int> feature_counts{4, 8, 19};
    std::vector<int> layer_counts{1, 3, 5};
    std::vector<EntanglementTopology> topologies{
        EntanglementTopology::PairsThenTie, EntanglementTopology::CascadeRing};
    int runs_per_cell = 10;
    /// "qnn" and/or "rnn<hidden>", e.g. rnn128, rnn1024.
    std::vector<std::string> models{"qnn", "rnn128", "rnn1024"};
    int epochs = 30;
    double learning_rate = 0.05;
    /// Adam step for a 128-unit RNN; other sizes use it scaled by 128 / hidden.
    double rnn_learning_rate = 0.01;
    int rnn_window = 12;
    std::uint64_t base_seed = 0;
    std::size_t train_months = 40;
    std::size_t validation_months = 6;
    bool standardize_before_pca = false;
    double input_scale = 1.0;

    /// ConfigError on invalid values; `available_features` bounds the
    /// feature counts (pass 0 to skip that check).
    void validate(int available_features = 0) const;
};

/// Hidden size of an "rnn<N>" model name, 0 for "qnn"; ConfigError otherwise.
int rnn_hidden_units(const std::string &model);

/// Adam step used for an RNN with `hidden_units` units under `plan`.
double rnn_learning_rate(const ExperimentPlan &plan, int hidden_units);

struct CellKey {
    int n_features = 0;
    std::string model;
    int n_layers = 0; ///< 0 for RNN cells
    EntanglementTopology topology = EntanglementTopology::PairsThenTie;

    [[nodiscard]] bool is_qnn() const { return model == "qnn"; }
    /// Directory-safe id, e.g. "f04_qnn_L1_PairsThenTie" or "f04_rnn128".
    [[nodiscard]] std::string id() const;

    friend auto operator<=>(const CellKey &, const CellKey &) = default;
};

/// Cells in plan order: per feature count, per model, then layers x
/// topologies for the QNN.
std::vector<CellKey> expand_cells(const ExperimentPlan &plan);

/// Seed of one run; depends only on the base seed and the run's
/// coordinates, never on scheduling order.
std::uint64_t run_seed(std::uint64_t base_seed, const CellKey &key, int run);

struct CellResult {
    CellKey key;
    std::vector<RunResult> runs;
    std::vector<YearMonth> test_months;
    std::vector<double> actual; ///< test targets, original units
    std::string error;          ///< non-empty when a run aborted

    [[nodiscard]] bool ok() const { return error.empty(); }
};

struct ExperimentResult {
    ExperimentPlan plan;
    int available_features = 0;
    /// Cumulative PCA variance of all complete features on training rows.
    std::vector<double> cumulative_variance;
    std::vector<CellResult> cells;
};

using ProgressFn = std::function<void(const CellKey &, int run, const RunResult *,
                                      const std::string &error)>;

/// JSON object with one key per ExperimentPlan field.
std::string plan_to_json(const ExperimentPlan &plan);
/// Parses a (possibly partial) plan; missing keys keep their defaults.
/// ConfigError on unknown keys or wrong types.
ExperimentPlan plan_from_json(const std::string &text);

/// Runs every cell of the plan. A failing run marks its cell failed; the
/// other cells still run. Throws ConfigError for an invalid plan.
ExperimentResult run_experiment(const ExperimentPlan &plan,
                                const Dataset &dataset,
                                const ProgressFn &progress = {});

/// Per-month statistics over the runs of one cell.
struct ReportTables {
    std::vector<double> mean_prediction;
    /// (1/R) sum_r |pred_rt - y_t|
    std::vector<double> monthly_mae;
    /// Sample stddev over runs of pred_rt (0 for a single run).
    std::vector<double> monthly_std;
    double mean_mae = 0.0;       ///< mean over months of monthly_mae
    double mae_dispersion = 0.0; ///< sample stddev over months of monthly_mae
    double median_mae = 0.0;
    double mean_std = 0.0;
    double median_std = 0.0;
};

/// predictions[r][t] for run r, month t. UsageError on ragged input.
ReportTables monthly_tables(std::span<const std::vector<double>> predictions,
                            std::span<const double> actual);

/// Mean monthly MAE over the first `head` months and over the remainder.
std::pair<double, double> split_mae(const ReportTables &t, std::size_t head);

/// Text of tables.csv.
std::string tables_csv(const ReportTables &t,
                       std::span<const YearMonth> months,
                       std::span<const double> actual);

/// Regenerates tables.csv text from the content of distributions.json.
std::string tables_csv_from_distributions(const std::string &json_text);

/// Writes per-cell tables.csv, distributions.json, loss.svg, params.txt,
/// runs.json and a top-level summary.json.
void emit_report(const ExperimentResult &result,
                 const std::filesystem::path &out_dir);

/// Reads back what emit_report wrote (runs.json files + summary.json).
ExperimentResult load_results(const std::filesystem::path &dir);

/// SVG of train (black) and validation (magenta) MAE per run.
std::string loss_svg(const CellResult &cell);

} // namespace qforecast
