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

#include "qforecast/harness.hpp"

#include "qforecast/errors.hpp"
#include "qforecast/rng.hpp"
#include "qforecast/rnn.hpp"
#include "qforecast/training.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace qforecast {

void ExperimentPlan::validate(int available_features) const {
    auto positive = [](const std::vector<int> &v, const char *what) {
        if (v.empty()) {
            throw ConfigError(std::string(what) + " must not be empty");
        }
        for (int x : v) {
            if (x < 1) {
                throw ConfigError(std::string(what) + " must all be >= 1");
            }
        }
    };
    positive(feature_counts, "feature_counts");
    if (std::find(models.begin(), models.end(), "qnn") != models.end()) {
        positive(layer_counts, "layer_counts");
        if (topologies.empty()) {
            throw ConfigError("topologies must not be empty");
        }
        for (int f : feature_counts) {
            if (f < 2) {
                throw ConfigError("the QNN needs at least 2 features (one qubit each)");
            }
            if (f > kMaxQubits) {
                throw ConfigError("the QNN supports at most " +
                                  std::to_string(kMaxQubits) + " features");
            }
        }
    }
    if (models.empty()) {
        throw ConfigError("models must not be empty");
    }
    for (const auto &m : models) {
        (void)rnn_hidden_units(m);
    }
    if (runs_per_cell < 1) {
        throw ConfigError("runs_per_cell must be >= 1");
    }
    if (epochs < 1) {
        throw ConfigError("epochs must be >= 1");
    }
    if (!(learning_rate > 0.0) || !(rnn_learning_rate > 0.0)) {
        throw ConfigError("learning rates must be positive");
    }
    if (rnn_window < 1) {
        throw ConfigError("rnn_window must be >= 1");
    }
    if (validation_months < 1 || validation_months >= train_months) {
        throw ConfigError("validation_months must be in [1, train_months)");
    }
    if (available_features > 0) {
        for (int f : feature_counts) {
            if (f > available_features) {
                throw ConfigError("feature count " + std::to_string(f) +
                                  " exceeds the " +
                                  std::to_string(available_features) +
                                  " complete features in the dataset");
            }
        }
    }
}

int rnn_hidden_units(const std::string &model) {
    if (model == "qnn") {
        return 0;
    }
    if (model.size() > 3 && model.compare(0, 3, "rnn") == 0) {
        const std::string digits = model.substr(3);
        if (std::all_of(digits.begin(), digits.end(),
                        [](char c) { return c >= '0' && c <= '9'; }) &&
            digits.size() <= 6) {
            const int h = std::stoi(digits);
            if (h >= 1) {
                return h;
            }
        }
    }
    throw ConfigError("unknown model '" + model +
                      "' (expected qnn or rnn<hidden units>)");
}

double rnn_learning_rate(const ExperimentPlan &plan, int hidden_units) {
    return plan.rnn_learning_rate * 128.0 / static_cast<double>(hidden_units);
}

std::string CellKey::id() const {
    char buf[96];
    if (is_qnn()) {
        std::snprintf(buf, sizeof buf, "f%02d_qnn_L%d_%s", n_features, n_layers,
                      to_string(topology));
    } else {
        std::snprintf(buf, sizeof buf, "f%02d_%s", n_features, model.c_str());
    }
    return buf;
}

std::vector<CellKey> expand_cells(const ExperimentPlan &plan) {
    std::vector<CellKey> cells;
    for (int f : plan.feature_counts) {
        for (const auto &m : plan.models) {
            if (m == "qnn") {
                for (int l : plan.layer_counts) {
                    for (auto t : plan.topologies) {
                        cells.push_back({f, m, l, t});
                    }
                }
            } else {
                cells.push_back({f, m, 0, EntanglementTopology::PairsThenTie});
            }
        }
    }
    return cells;
}

std::uint64_t run_seed(std::uint64_t base_seed, const CellKey &key, int run) {
    std::uint64_t model_hash = 0;
    for (char c : key.model) {
        model_hash = mix64(model_hash ^ static_cast<unsigned char>(c));
    }
    return derive_seed(base_seed,
                       {static_cast<std::uint64_t>(key.n_features), model_hash,
                        static_cast<std::uint64_t>(key.n_layers),
                        static_cast<std::uint64_t>(key.topology),
                        static_cast<std::uint64_t>(run)});
}

ExperimentResult run_experiment(const ExperimentPlan &plan,
                                const Dataset &dataset,
                                const ProgressFn &progress) {
    dataset.validate();
    const Dataset complete = drop_missing_features(dataset);
    const int available = static_cast<int>(complete.columns());
    plan.validate(available);
    if (plan.train_months >= dataset.rows()) {
        throw ConfigError("train_months = " + std::to_string(plan.train_months) +
                          " leaves no test months in a " +
                          std::to_string(dataset.rows()) + "-month dataset");
    }

    ExperimentResult result;
    result.plan = plan;
    result.available_features = available;
    {
        const auto [train, test] = chronological_split(complete, plan.train_months);
        (void)test;
        result.cumulative_variance = cumulative_variance(fit_pca(train.features));
    }

    std::map<int, PreparedData> prepared;
    for (int f : std::set<int>(plan.feature_counts.begin(), plan.feature_counts.end())) {
        PrepareOptions opts;
        opts.n_components = f;
        opts.train_months = plan.train_months;
        opts.validation_months = plan.validation_months;
        opts.standardize_before_pca = plan.standardize_before_pca;
        prepared.emplace(f, prepare(dataset, opts));
    }

    const auto keys = expand_cells(plan);
    result.cells.resize(keys.size());
    for (std::size_t c = 0; c < keys.size(); ++c) {
        auto &cell = result.cells[c];
        const auto &data = prepared.at(keys[c].n_features);
        cell.key = keys[c];
        cell.runs.resize(static_cast<std::size_t>(plan.runs_per_cell));
        cell.test_months.assign(data.months.begin() + static_cast<std::ptrdiff_t>(data.train_rows),
                                data.months.end());
        cell.actual.assign(data.target.begin() + static_cast<std::ptrdiff_t>(data.train_rows),
                           data.target.end());
    }

    const std::size_t runs = static_cast<std::size_t>(plan.runs_per_cell);
    const auto n_jobs = static_cast<std::ptrdiff_t>(keys.size() * runs);
    std::vector<std::string> errors(static_cast<std::size_t>(n_jobs));

    auto run_job = [&](std::ptrdiff_t job) {
        const std::size_t c = static_cast<std::size_t>(job) / runs;
        const int r = static_cast<int>(static_cast<std::size_t>(job) % runs);
        const CellKey &key = keys[c];
        const auto &data = prepared.at(key.n_features);
        const std::uint64_t seed = run_seed(plan.base_seed, key, r);
        auto &slot = result.cells[c].runs[static_cast<std::size_t>(r)];
        try {
            if (key.is_qnn()) {
                AnsatzConfig ac{key.n_features, key.n_layers, key.topology,
                                plan.input_scale};
                TrainConfig tc;
                tc.epochs = plan.epochs;
                tc.learning_rate = plan.learning_rate;
                tc.seed = seed;
                slot = train(data, ac, tc);
            } else {
                RnnConfig rc;
                rc.hidden_units = rnn_hidden_units(key.model);
                rc.window = plan.rnn_window;
                rc.epochs = plan.epochs;
                rc.learning_rate = rnn_learning_rate(plan, rc.hidden_units);
                rc.seed = seed;
                slot = rnn_train(data, rc);
            }
        } catch (const std::exception &e) {
            errors[static_cast<std::size_t>(job)] = e.what();
        }
        if (progress) {
#pragma omp critical(qforecast_progress)
            progress(key, r, errors[static_cast<std::size_t>(job)].empty() ? &slot : nullptr,
                     errors[static_cast<std::size_t>(job)]);
        }
    };

    // With several jobs per thread, run jobs concurrently and keep the
    // kernels serial (nested regions are inactive); otherwise let the
    // kernels use the threads.
    if (n_jobs > 1 && omp_get_max_threads() > 1) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t job = 0; job < n_jobs; ++job) {
            run_job(job);
        }
    } else {
        for (std::ptrdiff_t job = 0; job < n_jobs; ++job) {
            run_job(job);
        }
    }

    for (std::size_t c = 0; c < keys.size(); ++c) {
        for (std::size_t r = 0; r < runs; ++r) {
            const auto &e = errors[c * runs + r];
            if (!e.empty() && result.cells[c].error.empty()) {
                result.cells[c].error = "run " + std::to_string(r) + ": " + e;
            }
        }
        if (!result.cells[c].ok()) {
            result.cells[c].runs.clear();
        }
    }
    return result;
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double> &v) {
    double acc = 0.0;
    for (double x : v) {
        acc += x;
    }
    return acc / static_cast<double>(v.size());
}

double sample_std(const std::vector<double> &v) {
    if (v.size() < 2) {
        return 0.0;
    }
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) {
        acc += (x - m) * (x - m);
    }
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

} // namespace

ReportTables monthly_tables(std::span<const std::vector<double>> predictions,
                            std::span<const double> actual) {
    if (predictions.empty()) {
        throw UsageError("monthly_tables: no runs");
    }
    if (actual.empty()) {
        throw UsageError("monthly_tables: no months");
    }
    for (const auto &run : predictions) {
        if (run.size() != actual.size()) {
            throw UsageError("monthly_tables: run has " +
                             std::to_string(run.size()) + " predictions for " +
                             std::to_string(actual.size()) + " months");
        }
    }
    ReportTables t;
    const std::size_t months = actual.size();
    for (std::size_t m = 0; m < months; ++m) {
        std::vector<double> preds;
        double abs_err = 0.0;
        for (const auto &run : predictions) {
            preds.push_back(run[m]);
            abs_err += std::abs(run[m] - actual[m]);
        }
        t.mean_prediction.push_back(mean(preds));
        t.monthly_mae.push_back(abs_err / static_cast<double>(predictions.size()));
        t.monthly_std.push_back(sample_std(preds));
    }
    t.mean_mae = mean(t.monthly_mae);
    t.mae_dispersion = sample_std(t.monthly_mae);
    t.median_mae = median(t.monthly_mae);
    t.mean_std = mean(t.monthly_std);
    t.median_std = median(t.monthly_std);
    return t;
}

std::pair<double, double> split_mae(const ReportTables &t, std::size_t head) {
    const std::size_t n = t.monthly_mae.size();
    if (head == 0 || head >= n) {
        throw UsageError("split_mae: head must be in [1, months)");
    }
    const std::vector<double> first(t.monthly_mae.begin(),
                                    t.monthly_mae.begin() + static_cast<std::ptrdiff_t>(head));
    const std::vector<double> rest(t.monthly_mae.begin() + static_cast<std::ptrdiff_t>(head),
                                   t.monthly_mae.end());
    return {mean(first), mean(rest)};
}

} // namespace qforecast
