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

#include "qforecast/pipeline.hpp"

#include "qforecast/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace qforecast {

std::string to_string(const YearMonth &ym) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", ym.year, ym.month);
    return buf;
}

void Dataset::validate() const {
    const auto n = static_cast<Eigen::Index>(months.size());
    if (features.rows() != n || static_cast<Eigen::Index>(target.size()) != n) {
        throw ValidationError("dataset row counts disagree: " +
                              std::to_string(months.size()) + " months, " +
                              std::to_string(features.rows()) +
                              " feature rows, " +
                              std::to_string(target.size()) + " targets");
    }
    if (features.cols() != static_cast<Eigen::Index>(feature_names.size()) ||
        missing.rows() != features.rows() || missing.cols() != features.cols()) {
        throw ValidationError("dataset column counts disagree");
    }
    for (std::size_t i = 1; i < months.size(); ++i) {
        if (!(months[i - 1] < months[i])) {
            throw ValidationError("months not strictly increasing at " +
                                  to_string(months[i]));
        }
    }
}

StandardScaler fit_standardizer(const Eigen::MatrixXd &train_rows,
                                const std::vector<std::string> &names) {
    if (train_rows.rows() < 1) {
        throw UsageError("standardizer needs at least one row");
    }
    StandardScaler s;
    const double n = static_cast<double>(train_rows.rows());
    s.mean = train_rows.colwise().mean().transpose();
    s.stddev.resize(train_rows.cols());
    for (Eigen::Index c = 0; c < train_rows.cols(); ++c) {
        const double var =
            (train_rows.col(c).array() - s.mean(c)).square().sum() / n;
        s.stddev(c) = std::sqrt(var);
        if (!(s.stddev(c) > 0.0) || !std::isfinite(s.stddev(c))) {
            const std::string name =
                static_cast<std::size_t>(c) < names.size()
                    ? names[static_cast<std::size_t>(c)]
                    : "column " + std::to_string(c);
            throw DegenerateError("cannot standardize '" + name +
                                  "': zero standard deviation");
        }
    }
    return s;
}

Eigen::MatrixXd standardize(const StandardScaler &s,
                            const Eigen::MatrixXd &rows) {
    if (static_cast<std::size_t>(rows.cols()) != s.columns()) {
        throw UsageError("standardize: column count mismatch");
    }
    return (rows.rowwise() - s.mean.transpose()).array().rowwise() /
           s.stddev.transpose().array();
}

Eigen::MatrixXd destandardize(const StandardScaler &s,
                              const Eigen::MatrixXd &rows) {
    if (static_cast<std::size_t>(rows.cols()) != s.columns()) {
        throw UsageError("destandardize: column count mismatch");
    }
    Eigen::MatrixXd out =
        rows.array().rowwise() * s.stddev.transpose().array();
    return out.rowwise() + s.mean.transpose();
}

StandardScaler fit_standardizer(const std::vector<double> &train_values,
                                const std::string &name) {
    const Eigen::MatrixXd col = Eigen::Map<const Eigen::VectorXd>(
        train_values.data(), static_cast<Eigen::Index>(train_values.size()));
    return fit_standardizer(col, {name});
}

std::vector<double> standardize(const StandardScaler &s,
                                const std::vector<double> &values) {
    if (s.columns() != 1) {
        throw UsageError("vector standardize needs a one-column scaler");
    }
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = (values[i] - s.mean(0)) / s.stddev(0);
    }
    return out;
}

std::vector<double> destandardize(const StandardScaler &s,
                                  const std::vector<double> &values) {
    if (s.columns() != 1) {
        throw UsageError("vector destandardize needs a one-column scaler");
    }
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = values[i] * s.stddev(0) + s.mean(0);
    }
    return out;
}

PcaModel fit_pca(const Eigen::MatrixXd &train_rows) {
    if (train_rows.rows() < 2) {
        throw UsageError("PCA needs at least two rows, got " +
                         std::to_string(train_rows.rows()));
    }
    if (train_rows.cols() < 1) {
        throw UsageError("PCA needs at least one column");
    }
    PcaModel m;
    m.mean = train_rows.colwise().mean().transpose();
    const Eigen::MatrixXd centred = train_rows.rowwise() - m.mean.transpose();
    const Eigen::MatrixXd cov = (centred.transpose() * centred) /
                                static_cast<double>(train_rows.rows() - 1);

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw DegenerateError("PCA eigendecomposition failed");
    }
    const Eigen::Index d = cov.rows();
    m.components.resize(d, d);
    m.explained_variance.resize(d);
    // Eigen returns ascending eigenvalues.
    for (Eigen::Index i = 0; i < d; ++i) {
        const Eigen::Index src = d - 1 - i;
        Eigen::VectorXd v = eig.eigenvectors().col(src);
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0.0) {
            v = -v;
        }
        m.components.row(i) = v.transpose();
        m.explained_variance(i) = std::max(0.0, eig.eigenvalues()(src));
    }
    const double total = m.explained_variance.sum();
    if (!(total > 0.0)) {
        throw DegenerateError("PCA input has zero total variance");
    }
    m.explained_variance_ratio = m.explained_variance / total;
    return m;
}

Eigen::MatrixXd transform(const PcaModel &model, const Eigen::MatrixXd &rows,
                          int k) {
    if (k < 1 || k > model.components.rows()) {
        throw UsageError("PCA transform: k = " + std::to_string(k) +
                         " outside [1, " +
                         std::to_string(model.components.rows()) + "]");
    }
    if (rows.cols() != model.mean.size()) {
        throw UsageError("PCA transform: column count mismatch");
    }
    return (rows.rowwise() - model.mean.transpose()) *
           model.components.topRows(k).transpose();
}

std::vector<double> cumulative_variance(const PcaModel &model) {
    std::vector<double> out(static_cast<std::size_t>(
        model.explained_variance_ratio.size()));
    double acc = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        acc += model.explained_variance_ratio(static_cast<Eigen::Index>(i));
        out[i] = acc;
    }
    return out;
}

Dataset drop_missing_features(const Dataset &d) {
    d.validate();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < d.features.cols(); ++c) {
        if (!d.missing.col(c).any()) {
            keep.push_back(c);
        }
    }
    if (keep.empty()) {
        throw ValidationError(
            "every feature has missing cells; nothing left after dropping");
    }
    Dataset out;
    out.months = d.months;
    out.target = d.target;
    out.features.resize(d.features.rows(), static_cast<Eigen::Index>(keep.size()));
    out.missing.resize(d.features.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        out.features.col(col) = d.features.col(keep[i]);
        out.missing.col(col) = d.missing.col(keep[i]);
        out.feature_names.push_back(d.feature_names[static_cast<std::size_t>(keep[i])]);
    }
    return out;
}

std::pair<Dataset, Dataset> chronological_split(const Dataset &d,
                                                std::size_t train_months) {
    d.validate();
    if (train_months < 1 || train_months >= d.rows()) {
        throw UsageError("train_months = " + std::to_string(train_months) +
                         " must be in [1, " + std::to_string(d.rows() - 1) +
                         "]");
    }
    auto slice = [&](std::size_t begin, std::size_t count) {
        Dataset s;
        const auto b = static_cast<Eigen::Index>(begin);
        const auto n = static_cast<Eigen::Index>(count);
        s.features = d.features.middleRows(b, n);
        s.missing = d.missing.middleRows(b, n);
        s.target.assign(d.target.begin() + b, d.target.begin() + b + n);
        s.months.assign(d.months.begin() + b, d.months.begin() + b + n);
        s.feature_names = d.feature_names;
        return s;
    };
    return {slice(0, train_months), slice(train_months, d.rows() - train_months)};
}

PreparedData prepare(const Dataset &raw, const PrepareOptions &options) {
    const Dataset complete = drop_missing_features(raw);
    const int available = static_cast<int>(complete.columns());
    if (options.n_components < 1 || options.n_components > available) {
        throw ConfigError("feature count " +
                          std::to_string(options.n_components) +
                          " outside [1, " + std::to_string(available) +
                          "] (features left after dropping incomplete ones)");
    }
    if (options.validation_months >= options.train_months) {
        throw ConfigError("validation months must be fewer than training months");
    }
    const auto [train, test] = chronological_split(complete, options.train_months);
    (void)test;

    PreparedData out;
    out.months = complete.months;
    out.target = complete.target;
    out.train_rows = options.train_months;
    out.validation_rows = options.validation_months;

    Eigen::MatrixXd all = complete.features;
    Eigen::MatrixXd fit_rows = train.features;
    if (options.standardize_before_pca) {
        const StandardScaler pre = fit_standardizer(fit_rows, complete.feature_names);
        all = standardize(pre, all);
        fit_rows = standardize(pre, fit_rows);
    }
    std::vector<std::string> names = complete.feature_names;
    if (options.n_components < available) {
        const PcaModel pca = fit_pca(fit_rows);
        names.clear();
        for (int i = 1; i <= options.n_components; ++i) {
            names.push_back("pc" + std::to_string(i));
        }
        out.cumulative_variance = cumulative_variance(pca);
        all = transform(pca, all, options.n_components);
        fit_rows = transform(pca, fit_rows, options.n_components);
    }
    const StandardScaler scaler = fit_standardizer(fit_rows, names);
    out.features = standardize(scaler, all);

    out.target_scaler = fit_standardizer(train.target, "target");
    out.target_std = standardize(out.target_scaler, out.target);
    return out;
}

} // namespace qforecast
