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

#include "qforecast/errors.hpp"
#include "qforecast/harness.hpp"
#include "qforecast/rnn.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qforecast {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << text;
    out.close();
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

YearMonth parse_month(const std::string &s) {
    YearMonth ym;
    if (std::sscanf(s.c_str(), "%d-%d", &ym.year, &ym.month) != 2 ||
        ym.month < 1 || ym.month > 12) {
        throw ValidationError("bad month '" + s + "'");
    }
    return ym;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<std::vector<double>> run_predictions(const CellResult &cell) {
    std::vector<std::vector<double>> preds;
    preds.reserve(cell.runs.size());
    for (const auto &r : cell.runs) {
        preds.push_back(r.test_predictions);
    }
    return preds;
}

json month_strings(const std::vector<YearMonth> &months) {
    json arr = json::array();
    for (const auto &m : months) {
        arr.push_back(to_string(m));
    }
    return arr;
}

json run_to_json(const RunResult &r) {
    return {{"model", r.model},
            {"n_features", r.n_features},
            {"n_layers", r.n_layers},
            {"topology", r.topology},
            {"hidden_units", r.hidden_units},
            {"epochs", r.epochs},
            {"learning_rate", r.learning_rate},
            {"seed", r.seed},
            {"trainable_parameters", r.trainable_parameters},
            {"initial_train_mae", r.initial_train_mae},
            {"initial_validation_mae", r.initial_validation_mae},
            {"train_mae", r.train_mae},
            {"validation_mae", r.validation_mae},
            {"test_predictions", r.test_predictions},
            {"wall_seconds", r.wall_seconds}};
}

RunResult run_from_json(const json &j) {
    RunResult r;
    r.model = j.at("model").get<std::string>();
    r.n_features = j.at("n_features").get<int>();
    r.n_layers = j.at("n_layers").get<int>();
    r.topology = j.at("topology").get<std::string>();
    r.hidden_units = j.at("hidden_units").get<int>();
    r.epochs = j.at("epochs").get<int>();
    r.learning_rate = j.at("learning_rate").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.trainable_parameters = j.at("trainable_parameters").get<std::size_t>();
    r.initial_train_mae = j.at("initial_train_mae").get<double>();
    r.initial_validation_mae = j.at("initial_validation_mae").get<double>();
    r.train_mae = j.at("train_mae").get<std::vector<double>>();
    r.validation_mae = j.at("validation_mae").get<std::vector<double>>();
    r.test_predictions = j.at("test_predictions").get<std::vector<double>>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    return r;
}

json distributions_json(const CellResult &cell) {
    json preds = json::array();
    for (std::size_t t = 0; t < cell.actual.size(); ++t) {
        json month = json::array();
        for (const auto &r : cell.runs) {
            month.push_back(r.test_predictions[t]);
        }
        preds.push_back(std::move(month));
    }
    json seeds = json::array();
    for (const auto &r : cell.runs) {
        seeds.push_back(r.seed);
    }
    return {{"cell", cell.key.id()},
            {"months", month_strings(cell.test_months)},
            {"actual", cell.actual},
            {"predictions", std::move(preds)},
            {"seeds", std::move(seeds)}};
}

std::string params_txt(const CellResult &cell) {
    const int f = cell.key.n_features;
    std::ostringstream out;
    out << "features=" << f << '\n';
    std::size_t qnn = 0;
    if (cell.key.is_qnn()) {
        const AnsatzConfig ac{f, cell.key.n_layers, cell.key.topology, 1.0};
        qnn = ac.trainable_parameter_count();
        out << "layers=" << cell.key.n_layers << '\n';
        out << "qnn_quantum=" << ac.quantum_parameter_count() << '\n';
        out << "qnn=" << qnn << '\n';
    }
    const std::size_t r128 = rnn_parameter_count(128, f);
    out << "rnn128=" << r128 << '\n';
    out << "rnn1024=" << rnn_parameter_count(1024, f) << '\n';
    if (!cell.key.is_qnn()) {
        const int h = rnn_hidden_units(cell.key.model);
        out << cell.key.model << '=' << rnn_parameter_count(h, f) << '\n';
    } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g",
                      static_cast<double>(qnn) / static_cast<double>(r128));
        out << "qnn/rnn128=" << buf << '\n';
    }
    return out.str();
}

json cell_summary(const CellResult &cell, int available_features) {
    json j = {{"cell", cell.key.id()},
              {"model", cell.key.model},
              {"n_features", cell.key.n_features},
              {"ok", cell.ok()},
              {"runs", cell.runs.size()}};
    if (cell.key.is_qnn()) {
        j["n_layers"] = cell.key.n_layers;
        j["topology"] = to_string(cell.key.topology);
    }
    if (!cell.ok()) {
        j["error"] = cell.error;
        return j;
    }
    const auto preds = run_predictions(cell);
    const ReportTables t = monthly_tables(preds, cell.actual);
    j["trainable_parameters"] = cell.runs.front().trainable_parameters;
    j["mean_mae"] = t.mean_mae;
    j["mae_dispersion"] = t.mae_dispersion;
    j["median_mae"] = t.median_mae;
    j["mean_std"] = t.mean_std;
    j["median_std"] = t.median_std;
    std::vector<double> initial, final_loss;
    for (const auto &r : cell.runs) {
        initial.push_back(r.initial_train_mae);
        final_loss.push_back(r.train_mae.empty() ? r.initial_train_mae
                                                 : r.train_mae.back());
    }
    j["median_initial_train_mae"] = median_of(initial);
    j["median_final_train_mae"] = median_of(final_loss);
    if (cell.actual.size() > 7) {
        const auto [head, tail] = split_mae(t, 7);
        j["first7_mae"] = head;
        j["last_mae"] = tail;
        j["last_months"] = cell.actual.size() - 7;
        j["last_over_first7"] = head > 0.0 ? tail / head : INFINITY;
        j["full_feature_set"] = cell.key.n_features == available_features;
    }
    return j;
}

json plan_json(const ExperimentPlan &p) {
    json topologies = json::array();
    for (auto t : p.topologies) {
        topologies.push_back(to_string(t));
    }
    return {{"feature_counts", p.feature_counts},
            {"layer_counts", p.layer_counts},
            {"topologies", std::move(topologies)},
            {"runs_per_cell", p.runs_per_cell},
            {"models", p.models},
            {"epochs", p.epochs},
            {"learning_rate", p.learning_rate},
            {"rnn_learning_rate", p.rnn_learning_rate},
            {"rnn_window", p.rnn_window},
            {"base_seed", p.base_seed},
            {"train_months", p.train_months},
            {"validation_months", p.validation_months},
            {"standardize_before_pca", p.standardize_before_pca},
            {"input_scale", p.input_scale}};
}

ExperimentPlan plan_from(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("plan must be a JSON object");
    }
    ExperimentPlan p;
    for (const auto &[key, v] : j.items()) {
        try {
            if (key == "feature_counts") {
                p.feature_counts = v.get<std::vector<int>>();
            } else if (key == "layer_counts") {
                p.layer_counts = v.get<std::vector<int>>();
            } else if (key == "topologies") {
                p.topologies.clear();
                for (const auto &t : v) {
                    p.topologies.push_back(parse_topology(t.get<std::string>()));
                }
            } else if (key == "runs_per_cell") {
                p.runs_per_cell = v.get<int>();
            } else if (key == "models") {
                p.models = v.get<std::vector<std::string>>();
            } else if (key == "epochs") {
                p.epochs = v.get<int>();
            } else if (key == "learning_rate") {
                p.learning_rate = v.get<double>();
            } else if (key == "rnn_learning_rate") {
                p.rnn_learning_rate = v.get<double>();
            } else if (key == "rnn_window") {
                p.rnn_window = v.get<int>();
            } else if (key == "base_seed") {
                p.base_seed = v.get<std::uint64_t>();
            } else if (key == "train_months") {
                p.train_months = v.get<std::size_t>();
            } else if (key == "validation_months") {
                p.validation_months = v.get<std::size_t>();
            } else if (key == "standardize_before_pca") {
                p.standardize_before_pca = v.get<bool>();
            } else if (key == "input_scale") {
                p.input_scale = v.get<double>();
            } else {
                throw ConfigError("unknown plan key '" + key + "'");
            }
        } catch (const json::exception &e) {
            throw ConfigError("plan key '" + key + "': " + e.what());
        }
    }
    return p;
}

} // namespace

std::string plan_to_json(const ExperimentPlan &plan) {
    return plan_json(plan).dump(2) + "\n";
}

ExperimentPlan plan_from_json(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("plan is not valid JSON: ") + e.what());
    }
    return plan_from(j);
}

std::string tables_csv(const ReportTables &t, std::span<const YearMonth> months,
                       std::span<const double> actual) {
    if (months.size() != t.monthly_mae.size() || actual.size() != months.size()) {
        throw UsageError("tables_csv: month count mismatch");
    }
    std::string out = "month,actual,mean_prediction,mae,std\n";
    for (std::size_t i = 0; i < months.size(); ++i) {
        out += to_string(months[i]) + ',' + fmt6(actual[i]) + ',' +
               fmt6(t.mean_prediction[i]) + ',' + fmt6(t.monthly_mae[i]) + ',' +
               fmt6(t.monthly_std[i]) + '\n';
    }
    out += "mean_12m,,," + fmt6(t.mean_mae) + ',' + fmt6(t.mean_std) + '\n';
    out += "median_12m,,," + fmt6(t.median_mae) + ',' + fmt6(t.median_std) + '\n';
    out += "dispersion_12m,,," + fmt6(t.mae_dispersion) + ",\n";
    return out;
}

std::string tables_csv_from_distributions(const std::string &json_text) {
    const json j = json::parse(json_text);
    std::vector<YearMonth> months;
    for (const auto &m : j.at("months")) {
        months.push_back(parse_month(m.get<std::string>()));
    }
    const auto actual = j.at("actual").get<std::vector<double>>();
    const auto by_month = j.at("predictions").get<std::vector<std::vector<double>>>();
    if (by_month.size() != months.size() || by_month.empty()) {
        throw ValidationError("distributions: prediction rows do not match months");
    }
    std::vector<std::vector<double>> by_run(by_month.front().size());
    for (const auto &row : by_month) {
        if (row.size() != by_run.size()) {
            throw ValidationError("distributions: ragged prediction rows");
        }
        for (std::size_t r = 0; r < row.size(); ++r) {
            by_run[r].push_back(row[r]);
        }
    }
    return tables_csv(monthly_tables(by_run, actual), months, actual);
}

std::string loss_svg(const CellResult &cell) {
    constexpr double kW = 640, kH = 400, kL = 60, kR = 20, kT = 30, kB = 50;
    int epochs = 0;
    double ymax = 0.0;
    for (const auto &r : cell.runs) {
        epochs = std::max(epochs, static_cast<int>(r.train_mae.size()));
        ymax = std::max({ymax, r.initial_train_mae, r.initial_validation_mae});
        for (double v : r.train_mae) {
            ymax = std::max(ymax, v);
        }
        for (double v : r.validation_mae) {
            ymax = std::max(ymax, v);
        }
    }
    if (!(ymax > 0.0) || !std::isfinite(ymax)) {
        ymax = 1.0;
    }
    ymax *= 1.05;
    const double xs = (kW - kL - kR) / std::max(1, epochs);
    const double ys = (kH - kT - kB) / ymax;
    auto px = [&](int e) { return kL + xs * e; };
    auto py = [&](double v) { return kH - kB - ys * v; };
    char buf[320];
    std::string out;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" "
                  "height=\"%g\" viewBox=\"0 0 %g %g\">\n",
                  kW, kH, kW, kH);
    out += buf;
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + std::to_string(static_cast<int>(kL)) + "\" y=\"20\" "
           "font-family=\"sans-serif\" font-size=\"14\">" + cell.key.id() + "</text>\n";
    std::snprintf(buf, sizeof buf,
                  "<path d=\"M%g %g V%g H%g\" stroke=\"#444\" fill=\"none\"/>\n",
                  kL, kT, kH - kB, kW - kR);
    out += buf;
    for (int i = 0; i <= 4; ++i) {
        const double v = ymax * i / 4.0;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%g\" y=\"%.2f\" font-family=\"sans-serif\" "
                      "font-size=\"10\" text-anchor=\"end\">%.2f</text>\n",
                      kL - 4, py(v) + 3, v);
        out += buf;
    }
    const int step = std::max(1, epochs / 6);
    for (int e = 0; e <= epochs; e += step) {
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%g\" font-family=\"sans-serif\" "
                      "font-size=\"10\" text-anchor=\"middle\">%d</text>\n",
                      px(e), kH - kB + 14, e);
        out += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" "
                  "font-size=\"12\" text-anchor=\"middle\">epoch</text>\n",
                  (kL + kW - kR) / 2, kH - 12);
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"14\" y=\"%g\" font-family=\"sans-serif\" "
                  "font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 %g)\">"
                  "MAE (standardized)</text>\n",
                  (kT + kH - kB) / 2, (kT + kH - kB) / 2);
    out += buf;
    auto curve = [&](double first, const std::vector<double> &rest, const char *colour) {
        std::string pts;
        std::snprintf(buf, sizeof buf, "%.2f,%.2f", px(0), py(first));
        pts += buf;
        for (std::size_t e = 0; e < rest.size(); ++e) {
            std::snprintf(buf, sizeof buf, " %.2f,%.2f", px(static_cast<int>(e) + 1),
                          py(rest[e]));
            pts += buf;
        }
        out += "<polyline fill=\"none\" stroke-width=\"1\" stroke-opacity=\"0.7\" stroke=\"";
        out += colour;
        out += "\" points=\"" + pts + "\"/>\n";
    };
    for (const auto &r : cell.runs) {
        curve(r.initial_train_mae, r.train_mae, "black");
        curve(r.initial_validation_mae, r.validation_mae, "magenta");
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"end\"><tspan fill=\"black\">train</tspan> "
                  "<tspan fill=\"magenta\">validation</tspan></text>\n",
                  kW - kR, kT);
    out += buf;
    out += "</svg>\n";
    return out;
}

void emit_report(const ExperimentResult &result, const fs::path &out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create " + out_dir.string() + ": " +
                                 ec.message());
    }
    json cells = json::array();
    for (const auto &cell : result.cells) {
        const fs::path dir = out_dir / cell.key.id();
        fs::create_directories(dir, ec);
        if (ec) {
            throw std::runtime_error("cannot create " + dir.string() + ": " +
                                     ec.message());
        }
        json runs = json::array();
        for (const auto &r : cell.runs) {
            runs.push_back(run_to_json(r));
        }
        json key = {{"n_features", cell.key.n_features},
                    {"model", cell.key.model},
                    {"n_layers", cell.key.n_layers},
                    {"topology", to_string(cell.key.topology)}};
        json runs_doc = {{"cell", cell.key.id()},
                         {"key", std::move(key)},
                         {"error", cell.error},
                         {"months", month_strings(cell.test_months)},
                         {"actual", cell.actual},
                         {"runs", std::move(runs)}};
        write_file(dir / "runs.json", runs_doc.dump(1) + "\n");
        write_file(dir / "params.txt", params_txt(cell));
        if (cell.ok() && !cell.runs.empty()) {
            const auto preds = run_predictions(cell);
            const ReportTables t = monthly_tables(preds, cell.actual);
            write_file(dir / "tables.csv", tables_csv(t, cell.test_months, cell.actual));
            write_file(dir / "distributions.json",
                       distributions_json(cell).dump(1) + "\n");
            write_file(dir / "loss.svg", loss_svg(cell));
        }
        cells.push_back(cell_summary(cell, result.available_features));
    }
    const json summary = {{"plan", plan_json(result.plan)},
                          {"available_features", result.available_features},
                          {"cumulative_variance", result.cumulative_variance},
                          {"cells", std::move(cells)}};
    write_file(out_dir / "summary.json", summary.dump(2) + "\n");
}

ExperimentResult load_results(const fs::path &dir) {
    const fs::path summary_path = dir / "summary.json";
    json summary;
    try {
        summary = json::parse(read_file(summary_path));
    } catch (const json::exception &e) {
        throw ValidationError(summary_path.string() + ": " + e.what());
    }
    ExperimentResult result;
    try {
        result.plan = plan_from(summary.at("plan"));
        result.available_features = summary.at("available_features").get<int>();
        result.cumulative_variance =
            summary.at("cumulative_variance").get<std::vector<double>>();
        for (const auto &c : summary.at("cells")) {
            const fs::path path = dir / c.at("cell").get<std::string>() / "runs.json";
            json doc;
            try {
                doc = json::parse(read_file(path));
            } catch (const json::exception &e) {
                throw ValidationError(path.string() + ": " + e.what());
            }
            CellResult cell;
            const auto &key = doc.at("key");
            cell.key.n_features = key.at("n_features").get<int>();
            cell.key.model = key.at("model").get<std::string>();
            cell.key.n_layers = key.at("n_layers").get<int>();
            cell.key.topology = parse_topology(key.at("topology").get<std::string>());
            cell.error = doc.at("error").get<std::string>();
            for (const auto &m : doc.at("months")) {
                cell.test_months.push_back(parse_month(m.get<std::string>()));
            }
            cell.actual = doc.at("actual").get<std::vector<double>>();
            for (const auto &r : doc.at("runs")) {
                cell.runs.push_back(run_from_json(r));
            }
            result.cells.push_back(std::move(cell));
        }
    } catch (const json::exception &e) {
        throw ValidationError(dir.string() + ": malformed results: " + e.what());
    }
    return result;
}

} // namespace qforecast
