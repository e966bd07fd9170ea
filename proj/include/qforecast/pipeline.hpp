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
 * Preprocessing chain: drop incomplete features, split chronologically,
 * reduce with PCA fitted on the training rows, standardize with statistics
 * of the training rows.
 */
#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace qforecast {

struct YearMonth {
    int year = 0;
    int month = 0; ///< 1..12

    friend auto operator<=>(const YearMonth &, const YearMonth &) = default;
};

/// "2022-05"
std::string to_string(const YearMonth &ym);

/// Monthly samples. Missing feature cells hold NaN and are flagged in
/// `missing`.
struct Dataset {
    Eigen::MatrixXd features; ///< rows = months, cols = features
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> missing;
    std::vector<double> target;
    std::vector<YearMonth> months;
    std::vector<std::string> feature_names;

    [[nodiscard]] std::size_t rows() const { return months.size(); }
    [[nodiscard]] std::size_t columns() const { return feature_names.size(); }

    /// ValidationError if the fields disagree in shape or months are not
    /// strictly increasing.
    void validate() const;
};

/// Per-column (x - mean) / stddev with population stddev.
struct StandardScaler {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;

    [[nodiscard]] std::size_t columns() const {
        return static_cast<std::size_t>(mean.size());
    }
};

/// Fits on `train_rows` only. DegenerateError naming the first column
/// whose stddev is zero; names are optional.
StandardScaler fit_standardizer(const Eigen::MatrixXd &train_rows,
                                const std::vector<std::string> &names = {});
Eigen::MatrixXd standardize(const StandardScaler &s, const Eigen::MatrixXd &rows);
Eigen::MatrixXd destandardize(const StandardScaler &s,
                              const Eigen::MatrixXd &rows);

/// Single-column helpers for the target series.
StandardScaler fit_standardizer(const std::vector<double> &train_values,
                                const std::string &name);
std::vector<double> standardize(const StandardScaler &s,
                                const std::vector<double> &values);
std::vector<double> destandardize(const StandardScaler &s,
                                  const std::vector<double> &values);

struct PcaModel {
    Eigen::VectorXd mean;
    /// One orthonormal component per row, by descending variance. The
    /// sign is fixed so the largest-magnitude entry of each row is positive.
    Eigen::MatrixXd components;
    Eigen::VectorXd explained_variance;
    Eigen::VectorXd explained_variance_ratio;
};

/// Eigendecomposition of the sample covariance of mean-centred rows.
/// UsageError for fewer than two rows; DegenerateError for zero total
/// variance.
PcaModel fit_pca(const Eigen::MatrixXd &train_rows);

/// Projects rows onto the top k components; UsageError unless
/// 1 <= k <= number of columns.
Eigen::MatrixXd transform(const PcaModel &model, const Eigen::MatrixXd &rows,
                          int k);

/// Prefix sums of explained_variance_ratio.
std::vector<double> cumulative_variance(const PcaModel &model);

/// Removes every column with a missing cell. ValidationError when nothing
/// is left.
Dataset drop_missing_features(const Dataset &d);

/// First `train_months` rows vs the rest. UsageError unless
/// 1 <= train_months < rows.
std::pair<Dataset, Dataset> chronological_split(const Dataset &d,
                                                std::size_t train_months);

struct PrepareOptions {
    int n_components = 4;
    std::size_t train_months = 40;
    /// Trailing training months held out for validation losses.
    std::size_t validation_months = 6;
    /// Standardize raw features before PCA (the components are still
    /// standardized afterwards).
    bool standardize_before_pca = false;
};

/// Model-ready data. Rows keep chronological order: [0, fit_rows) are used
/// for gradient steps, [fit_rows, train_rows) for validation, and
/// [train_rows, rows) are the test months.
struct PreparedData {
    Eigen::MatrixXd features;        ///< standardized model inputs, all rows
    std::vector<double> target_std;  ///< target in standardized units
    std::vector<double> target;      ///< target in original units
    std::vector<YearMonth> months;
    StandardScaler target_scaler;
    std::size_t train_rows = 0;
    std::size_t validation_rows = 0;
    /// Cumulative variance of the PCA fitted on the training rows (empty
    /// when all features are kept).
    std::vector<double> cumulative_variance;

    [[nodiscard]] std::size_t rows() const { return months.size(); }
    [[nodiscard]] std::size_t fit_rows() const {
        return train_rows - validation_rows;
    }
    [[nodiscard]] std::size_t test_rows() const { return rows() - train_rows; }
    [[nodiscard]] int n_features() const {
        return static_cast<int>(features.cols());
    }
};

/// drop -> split -> PCA(k) -> standardize. When k equals the number of
/// complete features, PCA is skipped and the raw features are only
/// standardized.
PreparedData prepare(const Dataset &raw, const PrepareOptions &options);

} // namespace qforecast
