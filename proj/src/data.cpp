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

#include "qforecast/data.hpp"

#include "qforecast/errors.hpp"
#include "qforecast/rng.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace qforecast {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() &&
           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

double parse_number(std::string_view cell, std::size_t line,
                    const std::string &column) {
    // strtod handles the full double grammar on every libstdc++ version.
    const std::string s(cell);
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw ParseError("line " + std::to_string(line) + ": column '" +
                             column + "': not a number: '" + s + "'",
                         line);
    }
    return v;
}

int parse_int(std::string_view cell, std::size_t line, const std::string &column) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw ParseError("line " + std::to_string(line) + ": column '" +
                             column + "': not an integer: '" +
                             std::string(cell) + "'",
                         line);
    }
    return v;
}

} // namespace

Dataset parse_csv(std::istream &in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw ParseError("empty input: header row missing", 1);
    }
    ++line_no;
    const auto header = split(line);
    if (header.size() < 4 || header[0] != "year" || header[1] != "month" ||
        header[2] != "target") {
        throw ParseError(
            "line 1: header must be 'year,month,target,<feature...>'", 1);
    }
    Dataset d;
    for (std::size_t i = 3; i < header.size(); ++i) {
        if (header[i].empty()) {
            throw ParseError("line 1: empty feature name in column " +
                                 std::to_string(i + 1),
                             1);
        }
        d.feature_names.emplace_back(header[i]);
    }
    const std::size_t n_features = d.feature_names.size();

    std::vector<std::vector<double>> values;
    std::vector<std::vector<bool>> missing;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(header.size()) +
                                 " fields, got " + std::to_string(cells.size()),
                             line_no);
        }
        YearMonth ym{parse_int(cells[0], line_no, "year"),
                     parse_int(cells[1], line_no, "month")};
        if (ym.month < 1 || ym.month > 12) {
            throw ParseError("line " + std::to_string(line_no) +
                                 ": month must be 1..12, got " +
                                 std::to_string(ym.month),
                             line_no);
        }
        if (cells[2].empty()) {
            throw ParseError("line " + std::to_string(line_no) +
                                 ": target value missing",
                             line_no);
        }
        const double target = parse_number(cells[2], line_no, "target");

        if (!d.months.empty()) {
            const auto dup = std::find(d.months.begin(), d.months.end(), ym);
            if (dup != d.months.end()) {
                throw ValidationError("duplicate month " + to_string(ym) +
                                      " (line " + std::to_string(line_no) + ")");
            }
            if (ym < d.months.back()) {
                throw ValidationError("month " + to_string(ym) + " on line " +
                                      std::to_string(line_no) + " comes after " +
                                      to_string(d.months.back()) +
                                      "; rows must be in chronological order");
            }
        }
        std::vector<double> row(n_features);
        std::vector<bool> row_missing(n_features, false);
        for (std::size_t f = 0; f < n_features; ++f) {
            const auto cell = cells[3 + f];
            if (cell.empty()) {
                row[f] = std::numeric_limits<double>::quiet_NaN();
                row_missing[f] = true;
            } else {
                row[f] = parse_number(cell, line_no, d.feature_names[f]);
            }
        }
        d.months.push_back(ym);
        d.target.push_back(target);
        values.push_back(std::move(row));
        missing.push_back(std::move(row_missing));
    }
    if (d.months.empty()) {
        throw ValidationError("no data rows");
    }

    const auto rows = static_cast<Eigen::Index>(values.size());
    const auto cols = static_cast<Eigen::Index>(n_features);
    d.features.resize(rows, cols);
    d.missing.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            d.features(r, c) = values[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            d.missing(r, c) = missing[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
    }
    d.validate();
    return d;
}

Dataset load_csv(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return parse_csv(in);
}

void write_csv(const Dataset &d, std::ostream &out) {
    d.validate();
    out << "year,month,target";
    for (const auto &name : d.feature_names) {
        out << ',' << name;
    }
    out << '\n';
    char buf[32];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    };
    for (std::size_t r = 0; r < d.rows(); ++r) {
        const auto row = static_cast<Eigen::Index>(r);
        out << d.months[r].year << ',' << d.months[r].month << ','
            << num(d.target[r]);
        for (Eigen::Index c = 0; c < d.features.cols(); ++c) {
            out << ',';
            if (!d.missing(row, c)) {
                out << num(d.features(row, c));
            }
        }
        out << '\n';
    }
}

void write_csv(const Dataset &d, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    write_csv(d, out);
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

void SyntheticConfig::validate() const {
    if (n_months < 24) {
        throw ConfigError("synthetic data needs at least 24 months, got " +
                          std::to_string(n_months));
    }
    if (n_features < 1) {
        throw ConfigError("synthetic data needs at least one feature");
    }
    if (n_missing_2019 < 0 || n_missing_2019 >= n_features) {
        throw ConfigError("n_missing_2019 must be in [0, n_features)");
    }
}

namespace {

constexpr int kFactors = 3;
constexpr double kAr = 0.85;
constexpr int kMissingMonths = 12;
constexpr int kExplodeMonths = 5;
constexpr int kShockBegin = 14; // 0-based row of month 15
constexpr int kShockEnd = 20;   // one past month 20
constexpr double kExplodingRelScale = 0.02;

struct Layout {
    std::vector<int> missing_columns;
    int exploding = -1;
    std::vector<double> offset, rel_scale;
    std::vector<std::array<double, kFactors + 1>> loading;
};

// Column layout draws come first from their own stream so that
// exploding_column() can recompute them without the series.
Layout draw_layout(const SyntheticConfig &cfg) {
    Rng rng(derive_seed(cfg.seed, {1}));
    Layout l;
    const auto nf = static_cast<std::size_t>(cfg.n_features);
    l.offset.resize(nf);
    l.rel_scale.resize(nf);
    l.loading.resize(nf);
    for (std::size_t j = 0; j < nf; ++j) {
        l.offset[j] = rng.uniform(60.0, 160.0);
        l.rel_scale[j] = rng.uniform(0.02, 0.12);
        for (auto &w : l.loading[j]) {
            w = rng.normal();
        }
    }
    std::vector<int> order(nf);
    for (std::size_t j = 0; j < nf; ++j) {
        order[j] = static_cast<int>(j);
    }
    for (std::size_t j = 0; j < static_cast<std::size_t>(cfg.n_missing_2019); ++j) {
        const std::size_t k = j + static_cast<std::size_t>(rng.below(nf - j));
        std::swap(order[j], order[k]);
    }
    l.missing_columns.assign(order.begin(), order.begin() + cfg.n_missing_2019);
    std::sort(l.missing_columns.begin(), l.missing_columns.end());
    if (cfg.exploding_feature) {
        // Complete column that tracks the main target driver most closely,
        // turned into a steady level-type series.
        double best = -1.0;
        for (std::size_t j = 0; j < nf; ++j) {
            const bool masked = std::binary_search(l.missing_columns.begin(),
                                                   l.missing_columns.end(),
                                                   static_cast<int>(j));
            if (!masked && std::abs(l.loading[j][0]) > best) {
                best = std::abs(l.loading[j][0]);
                l.exploding = static_cast<int>(j);
            }
        }
        l.rel_scale[static_cast<std::size_t>(l.exploding)] = kExplodingRelScale;
    }
    return l;
}

} // namespace

int exploding_column(const SyntheticConfig &cfg) {
    cfg.validate();
    return draw_layout(cfg).exploding;
}

Dataset generate_synthetic(const SyntheticConfig &cfg) {
    cfg.validate();
    const Layout layout = draw_layout(cfg);
    Rng rng(derive_seed(cfg.seed, {2}));
    const int T = cfg.n_months;
    const int F = cfg.n_features;

    // Latent drivers: three AR(1) factors plus the seasonal cycle.
    std::vector<std::array<double, kFactors + 1>> drivers(static_cast<std::size_t>(T));
    std::array<double, kFactors> f{};
    for (auto &v : f) {
        v = rng.normal();
    }
    const double innovation = std::sqrt(1.0 - kAr * kAr);
    for (int t = 0; t < T; ++t) {
        if (t > 0) {
            for (auto &v : f) {
                v = kAr * v + innovation * rng.normal();
            }
        }
        auto &d = drivers[static_cast<std::size_t>(t)];
        for (int k = 0; k < kFactors; ++k) {
            d[static_cast<std::size_t>(k)] = f[static_cast<std::size_t>(k)];
        }
        if (cfg.covid_shock && t >= kShockBegin && t < kShockEnd) {
            d[0] -= 2.5;
        }
        d[kFactors] = std::sin(2.0 * std::numbers::pi * (t % 12) / 12.0);
    }

    Dataset out;
    out.features.resize(T, F);
    out.missing.setConstant(T, F, false);
    for (int j = 0; j < F; ++j) {
        char name[16];
        std::snprintf(name, sizeof name, "f%02d", j + 1);
        out.feature_names.emplace_back(name);
    }
    for (int t = 0; t < T; ++t) {
        out.months.push_back({cfg.start_year + t / 12, t % 12 + 1});
        const auto &d = drivers[static_cast<std::size_t>(t)];
        for (int j = 0; j < F; ++j) {
            const auto col = static_cast<std::size_t>(j);
            double signal = 0.0;
            for (std::size_t k = 0; k <= kFactors; ++k) {
                signal += layout.loading[col][k] * d[k];
            }
            signal += 0.3 * rng.normal();
            out.features(t, j) =
                layout.offset[col] * (1.0 + layout.rel_scale[col] * signal);
        }
        const double level = 0.9 * d[0] + 0.4 * d[1];
        const double y = 20000.0 + 3500.0 * std::tanh(level) +
                         1200.0 * std::sin(d[2]) + 800.0 * d[kFactors] +
                         300.0 * rng.normal();
        out.target.push_back(y);
    }
    for (int j : layout.missing_columns) {
        for (int t = 0; t < std::min(kMissingMonths, T); ++t) {
            out.features(t, j) = std::numeric_limits<double>::quiet_NaN();
            out.missing(t, j) = true;
        }
    }
    if (layout.exploding >= 0) {
        for (int k = 0; k < kExplodeMonths; ++k) {
            const int t = T - kExplodeMonths + k;
            out.features(t, layout.exploding) *= 100.0 * (k + 1) / kExplodeMonths;
        }
    }
    out.validate();
    return out;
}

} // namespace qforecast
