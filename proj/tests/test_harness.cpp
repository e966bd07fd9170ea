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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qforecast/data.hpp"
#include "qforecast/errors.hpp"
#include "qforecast/harness.hpp"
#include "qforecast/rnn.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace qforecast;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("qforecast_test_" + name);
    fs::remove_all(dir);
    return dir;
}

ExperimentPlan small_plan() {
    ExperimentPlan p;
    p.feature_counts = {3};
    p.layer_counts = {1};
    p.topologies = {EntanglementTopology::PairsThenTie};
    p.models = {"qnn"};
    p.runs_per_cell = 2;
    p.epochs = 3;
    p.base_seed = 5;
    return p;
}

const Dataset &dataset() {
    static const Dataset d = generate_synthetic(SyntheticConfig{.seed = 1});
    return d;
}

bool same_predictions(const ExperimentResult &a, const ExperimentResult &b) {
    if (a.cells.size() != b.cells.size()) {
        return false;
    }
    for (std::size_t c = 0; c < a.cells.size(); ++c) {
        const auto &x = a.cells[c], &y = b.cells[c];
        if (!(x.key == y.key) || x.runs.size() != y.runs.size()) {
            return false;
        }
        for (std::size_t r = 0; r < x.runs.size(); ++r) {
            if (x.runs[r].seed != y.runs[r].seed ||
                x.runs[r].train_mae != y.runs[r].train_mae ||
                x.runs[r].test_predictions != y.runs[r].test_predictions) {
                return false;
            }
        }
    }
    return true;
}

} // namespace

TEST_CASE("monthly tables: perfect predictions give a zero table") {
    const std::vector<double> y{3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8};
    const std::vector<std::vector<double>> runs{y};
    const auto t = monthly_tables(runs, y);
    for (std::size_t m = 0; m < y.size(); ++m) {
        CHECK(t.monthly_mae[m] == 0.0);
        CHECK(t.monthly_std[m] == 0.0);
        CHECK(t.mean_prediction[m] == y[m]);
    }
    CHECK(t.mean_mae == 0.0);
    CHECK(t.median_mae == 0.0);
    CHECK(t.mae_dispersion == 0.0);
}

TEST_CASE("monthly tables: runs at y+1 and y-1") {
    const std::vector<double> y{10, 20, 30};
    std::vector<double> up = y, down = y;
    for (auto &v : up) { v += 1.0; }
    for (auto &v : down) { v -= 1.0; }
    const std::vector<std::vector<double>> runs{up, down};
    const auto t = monthly_tables(runs, y);
    for (std::size_t m = 0; m < 3; ++m) {
        CHECK(t.monthly_mae[m] == doctest::Approx(1.0));
        CHECK(t.monthly_std[m] == doctest::Approx(std::sqrt(2.0)));
        CHECK(t.mean_prediction[m] == doctest::Approx(y[m]));
    }
    CHECK(t.mean_std == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("monthly tables: MAE series 1..12") {
    std::vector<double> y(12, 0.0), pred(12);
    for (int m = 0; m < 12; ++m) {
        pred[static_cast<std::size_t>(m)] = (m % 2 == 0 ? 1.0 : -1.0) * (m + 1);
    }
    const std::vector<std::vector<double>> runs{pred};
    const auto t = monthly_tables(runs, y);
    CHECK(t.mean_mae == doctest::Approx(6.5));
    CHECK(t.median_mae == doctest::Approx(6.5));
    // Sample stddev of 1..12 is sqrt(13).
    CHECK(t.mae_dispersion == doctest::Approx(std::sqrt(13.0)));
    const auto [head, tail] = split_mae(t, 7);
    CHECK(head == doctest::Approx(4.0));
    CHECK(tail == doctest::Approx(10.0));
}

TEST_CASE("monthly tables reject ragged runs") {
    const std::vector<double> y{1, 2, 3};
    const std::vector<std::vector<double>> runs{{1, 2, 3}, {1, 2}};
    CHECK_THROWS_AS((void)monthly_tables(runs, y), UsageError);
    CHECK_THROWS_AS((void)monthly_tables(std::span<const std::vector<double>>{}, y),
                    UsageError);
}

TEST_CASE("default QNN grid has 18 cells") {
    ExperimentPlan p;
    p.models = {"qnn"};
    const auto cells = expand_cells(p);
    CHECK(cells.size() == 18);
    std::set<std::string> ids;
    for (const auto &c : cells) {
        ids.insert(c.id());
    }
    CHECK(ids.size() == 18);
    CHECK(cells.front().id() == "f04_qnn_L1_PairsThenTie");
    CHECK(cells.back().id() == "f19_qnn_L5_CascadeRing");
    CHECK(expand_cells(ExperimentPlan{}).size() == 24);
}

TEST_CASE("run seeds depend only on coordinates") {
    const CellKey a{4, "qnn", 1, EntanglementTopology::PairsThenTie};
    const CellKey b{4, "qnn", 1, EntanglementTopology::CascadeRing};
    CHECK(run_seed(0, a, 0) == run_seed(0, a, 0));
    std::set<std::uint64_t> seeds{run_seed(0, a, 0), run_seed(0, a, 1),
                                  run_seed(0, b, 0), run_seed(1, a, 0)};
    CHECK(seeds.size() == 4);
}

TEST_CASE("plan validation") {
    ExperimentPlan p = small_plan();
    CHECK_NOTHROW(p.validate(19));
    CHECK_THROWS_AS(p.validate(2), ConfigError);
    p.feature_counts = {1};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = small_plan();
    p.models = {"lstm"};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = small_plan();
    p.runs_per_cell = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = small_plan();
    p.layer_counts = {};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK(rnn_hidden_units("rnn1024") == 1024);
    CHECK(rnn_hidden_units("qnn") == 0);
    CHECK_THROWS_AS(rnn_hidden_units("rnn"), ConfigError);
    CHECK(rnn_learning_rate(ExperimentPlan{}, 1024) == doctest::Approx(0.00125));
}

TEST_CASE("plan JSON round trip") {
    ExperimentPlan p = small_plan();
    p.models = {"qnn", "rnn128"};
    p.topologies = {EntanglementTopology::CascadeRing};
    const auto back = plan_from_json(plan_to_json(p));
    CHECK(plan_to_json(back) == plan_to_json(p));
    CHECK(back.topologies == p.topologies);

    const auto partial = plan_from_json(R"({"runs_per_cell": 3})");
    CHECK(partial.runs_per_cell == 3);
    CHECK(partial.feature_counts == ExperimentPlan{}.feature_counts);
    CHECK_THROWS_AS(plan_from_json(R"({"runs": 3})"), ConfigError);
    CHECK_THROWS_AS(plan_from_json(R"({"epochs": "many"})"), ConfigError);
}

TEST_CASE("one cell with two runs") {
    const auto result = run_experiment(small_plan(), dataset());
    REQUIRE(result.cells.size() == 1);
    const auto &cell = result.cells[0];
    CHECK(cell.ok());
    REQUIRE(cell.runs.size() == 2);
    CHECK(cell.runs[0].seed != cell.runs[1].seed);
    CHECK(cell.runs[0].seed == run_seed(5, cell.key, 0));
    CHECK(cell.test_months.size() == 12);
    CHECK(cell.actual.size() == 12);
    CHECK(cell.runs[1].test_predictions.size() == 12);
    CHECK(result.available_features == 19);
    CHECK(result.cumulative_variance.size() == 19);
    CHECK(std::abs(result.cumulative_variance.back() - 1.0) < 1e-10);
}

TEST_CASE("experiments are reproducible and independent of grid order") {
    ExperimentPlan p = small_plan();
    p.feature_counts = {2, 3};
    p.models = {"qnn", "rnn4"};
    const auto a = run_experiment(p, dataset());
    CHECK(same_predictions(a, run_experiment(p, dataset())));

    ExperimentPlan reordered = p;
    reordered.feature_counts = {3, 2};
    const auto b = run_experiment(reordered, dataset());
    for (const auto &cell : a.cells) {
        bool found = false;
        for (const auto &other : b.cells) {
            if (other.key == cell.key) {
                found = true;
                CHECK(other.runs[0].test_predictions == cell.runs[0].test_predictions);
            }
        }
        CHECK(found);
    }
}

TEST_CASE("a failing cell does not stop the others") {
    ExperimentPlan p = small_plan();
    p.models = {"qnn", "rnn4"};
    p.rnn_window = 40; // longer than the 34 fit months
    std::vector<std::string> errors;
    const auto r = run_experiment(p, dataset(),
                                  [&](const CellKey &, int, const RunResult *res,
                                      const std::string &err) {
                                      if (res == nullptr) {
                                          errors.push_back(err);
                                      }
                                  });
    REQUIRE(r.cells.size() == 2);
    CHECK(r.cells[0].ok());
    CHECK(r.cells[0].runs.size() == 2);
    CHECK_FALSE(r.cells[1].ok());
    CHECK(r.cells[1].runs.empty());
    CHECK(errors.size() == 2);

    const auto dir = scratch("failed");
    emit_report(r, dir);
    CHECK(fs::exists(dir / "f03_qnn_L1_PairsThenTie" / "tables.csv"));
    CHECK_FALSE(fs::exists(dir / "f03_rnn4" / "tables.csv"));
    const auto back = load_results(dir);
    CHECK(back.cells[1].error == r.cells[1].error);
    fs::remove_all(dir);
}

TEST_CASE("report files and their contents") {
    ExperimentPlan p = small_plan();
    p.feature_counts = {4};
    p.runs_per_cell = 3;
    const auto result = run_experiment(p, dataset());
    const auto dir = scratch("report");
    emit_report(result, dir);
    const auto cell_dir = dir / "f04_qnn_L1_PairsThenTie";
    for (const char *f : {"tables.csv", "distributions.json", "loss.svg", "params.txt",
                          "runs.json"}) {
        CHECK(fs::exists(cell_dir / f));
    }
    CHECK(fs::exists(dir / "summary.json"));

    const auto params = slurp(cell_dir / "params.txt");
    CHECK(params.find("qnn=17\n") != std::string::npos);
    CHECK(params.find("rnn128=17153\n") != std::string::npos);
    CHECK(params.find("qnn_quantum=12\n") != std::string::npos);

    const auto dist = nlohmann::json::parse(slurp(cell_dir / "distributions.json"));
    CHECK(dist.at("months").size() == 12);
    for (const auto &month : dist.at("predictions")) {
        CHECK(month.size() == 3);
    }

    const auto tables = slurp(cell_dir / "tables.csv");
    CHECK(tables.rfind("month,actual,mean_prediction,mae,std\n", 0) == 0);
    CHECK(tables_csv_from_distributions(slurp(cell_dir / "distributions.json")) == tables);

    const auto svg = slurp(cell_dir / "loss.svg");
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("magenta") != std::string::npos);

    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary.at("cells").size() == 1);
    CHECK(summary.at("cells")[0].contains("first7_mae"));

    const auto loaded = load_results(dir);
    CHECK(same_predictions(loaded, result));
    CHECK(plan_to_json(loaded.plan) == plan_to_json(result.plan));
    const auto again = scratch("report_again");
    emit_report(loaded, again);
    CHECK(slurp(again / "f04_qnn_L1_PairsThenTie" / "tables.csv") == tables);
    fs::remove_all(dir);
    fs::remove_all(again);
}

TEST_CASE("RNN params file") {
    ExperimentPlan p = small_plan();
    p.feature_counts = {4};
    p.models = {"rnn8"};
    p.runs_per_cell = 1;
    p.epochs = 1;
    const auto dir = scratch("rnn_params");
    emit_report(run_experiment(p, dataset()), dir);
    const auto params = slurp(dir / "f04_rnn8" / "params.txt");
    CHECK(params.find("rnn8=" + std::to_string(rnn_parameter_count(8, 4)) + "\n") !=
          std::string::npos);
    CHECK(params.find("qnn=") == std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("loading a missing results directory fails with its path") {
    const auto dir = scratch("missing");
    try {
        (void)load_results(dir);
        FAIL("expected an error");
    } catch (const std::exception &e) {
        CHECK(std::string(e.what()).find("summary.json") != std::string::npos);
    }
}
