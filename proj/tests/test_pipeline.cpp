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

#include "oracles.hpp"

#include "qforecast/errors.hpp"
#include "qforecast/pipeline.hpp"
#include "qforecast/rng.hpp"

#include <cmath>
#include <limits>

using namespace qforecast;

namespace {

Eigen::MatrixXd random_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = rng.normal() * static_cast<double>(c + 1);
        }
    }
    return m;
}

Eigen::MatrixXd random_orthogonal(Rng &rng, Eigen::Index d) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(rng, d, d));
    return qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
}

Dataset make_dataset(Rng &rng, std::size_t rows, std::size_t cols) {
    Dataset d;
    d.features = random_matrix(rng, static_cast<Eigen::Index>(rows),
                               static_cast<Eigen::Index>(cols));
    d.missing = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
        d.features.rows(), d.features.cols(), false);
    for (std::size_t r = 0; r < rows; ++r) {
        d.target.push_back(20000.0 + 1000.0 * rng.normal());
        d.months.push_back(YearMonth{2019 + static_cast<int>(r / 12),
                                     1 + static_cast<int>(r % 12)});
    }
    for (std::size_t c = 0; c < cols; ++c) {
        d.feature_names.push_back("c" + std::to_string(c));
    }
    return d;
}

void mark_missing(Dataset &d, Eigen::Index row, Eigen::Index col) {
    d.features(row, col) = std::numeric_limits<double>::quiet_NaN();
    d.missing(row, col) = true;
}

} // namespace

TEST_CASE("standardizer on [1, 2, 3]") {
    Eigen::MatrixXd col(3, 1);
    col << 1, 2, 3;
    const auto s = fit_standardizer(col);
    CHECK(s.mean(0) == doctest::Approx(2.0));
    CHECK(s.stddev(0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
    const auto z = standardize(s, col);
    CHECK(z(0, 0) == doctest::Approx(-1.224744871391589).epsilon(1e-12));
    CHECK(z(1, 0) == doctest::Approx(0.0));
    CHECK(z(2, 0) == doctest::Approx(1.224744871391589).epsilon(1e-12));
}

TEST_CASE("standardized training columns have zero mean and unit variance") {
    Rng rng(1);
    const auto x = random_matrix(rng, 40, 6);
    const auto z = standardize(fit_standardizer(x), x);
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
        const double mean = z.col(c).mean();
        const double var = (z.col(c).array() - mean).square().mean();
        CHECK(std::abs(mean) < 1e-10);
        CHECK(std::abs(var - 1.0) < 1e-10);
    }
}

TEST_CASE("destandardize inverts standardize") {
    Rng rng(2);
    const auto x = random_matrix(rng, 20, 4);
    const auto s = fit_standardizer(x);
    CHECK((destandardize(s, standardize(s, x)) - x).cwiseAbs().maxCoeff() < 1e-12);

    const std::vector<double> y{3.0, 8.0, -1.0, 4.5};
    const auto sy = fit_standardizer(y, "target");
    const auto back = destandardize(sy, standardize(sy, y));
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(std::abs(back[i] - y[i]) < 1e-12);
    }
}

TEST_CASE("a constant column cannot be standardized and is named") {
    Eigen::MatrixXd x(3, 2);
    x << 1, 5, 2, 5, 3, 5;
    try {
        (void)fit_standardizer(x, {"alpha", "beta"});
        FAIL("expected DegenerateError");
    } catch (const DegenerateError &e) {
        CHECK(std::string(e.what()).find("beta") != std::string::npos);
    }
}

TEST_CASE("PCA ratios match the brute-force covariance eigenvalues") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index rows = 5 + static_cast<Eigen::Index>(rng.below(30));
        const Eigen::Index cols = 2 + static_cast<Eigen::Index>(rng.below(6));
        const auto x = random_matrix(rng, rows, cols);
        const auto m = fit_pca(x);
        auto ev = oracle::jacobi_eigenvalues(oracle::covariance(x));
        double total = 0.0;
        for (double &v : ev) {
            v = std::max(v, 0.0);
            total += v;
        }
        for (Eigen::Index i = 0; i < cols; ++i) {
            CHECK(std::abs(m.explained_variance_ratio(i) -
                           ev[static_cast<std::size_t>(i)] / total) < 1e-10);
        }
    }
}

TEST_CASE("random 5x3 matrix") {
    Rng rng(4);
    const auto x = random_matrix(rng, 5, 3);
    const auto m = fit_pca(x);
    const auto ev = oracle::jacobi_eigenvalues(oracle::covariance(x));
    const double total = ev[0] + ev[1] + ev[2];
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(m.explained_variance_ratio(i) - ev[static_cast<std::size_t>(i)] / total) < 1e-10);
    }
}

TEST_CASE("points on a line have a single component") {
    Eigen::MatrixXd x(6, 2);
    for (int i = 0; i < 6; ++i) {
        x(i, 0) = 1.5 * i - 2.0;
        x(i, 1) = -0.5 * (1.5 * i - 2.0) + 4.0;
    }
    const auto m = fit_pca(x);
    CHECK(m.explained_variance_ratio(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(m.explained_variance_ratio(1)) < 1e-12);
}

TEST_CASE("components are orthonormal and ratios descend to a total of 1") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_matrix(rng, 30, 7);
        const auto m = fit_pca(x);
        const Eigen::MatrixXd gram = m.components * m.components.transpose();
        CHECK((gram - Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-10);
        for (Eigen::Index i = 0; i < 7; ++i) {
            CHECK(m.explained_variance_ratio(i) >= 0.0);
            if (i > 0) {
                CHECK(m.explained_variance_ratio(i) <= m.explained_variance_ratio(i - 1));
            }
        }
        const auto cum = cumulative_variance(m);
        for (std::size_t i = 1; i < cum.size(); ++i) {
            CHECK(cum[i] >= cum[i - 1]);
        }
        CHECK(std::abs(cum.back() - 1.0) < 1e-10);
    }
}

TEST_CASE("projection is invariant to an orthogonal pre-rotation up to sign") {
    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_matrix(rng, 25, 5);
        const auto q = random_orthogonal(rng, 5);
        const Eigen::MatrixXd rotated = x * q;
        const auto a = transform(fit_pca(x), x, 3);
        const auto b = transform(fit_pca(rotated), rotated, 3);
        for (Eigen::Index c = 0; c < 3; ++c) {
            const double same = (a.col(c) - b.col(c)).cwiseAbs().maxCoeff();
            const double flipped = (a.col(c) + b.col(c)).cwiseAbs().maxCoeff();
            CHECK(std::min(same, flipped) < 1e-9);
        }
    }
}

TEST_CASE("reconstruction error does not grow with k") {
    Rng rng(7);
    const auto x = random_matrix(rng, 30, 6);
    const auto m = fit_pca(x);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 6; ++k) {
        const Eigen::MatrixXd z = transform(m, x, k);
        const Eigen::MatrixXd back =
            (z * m.components.topRows(k)).rowwise() + m.mean.transpose();
        const double err = (back - x).squaredNorm();
        CHECK(err <= prev + 1e-9);
        prev = err;
    }
    CHECK(prev < 1e-18 * x.squaredNorm() + 1e-18);
}

TEST_CASE("cumulative variance of fixed ratios") {
    PcaModel m;
    m.explained_variance_ratio.resize(3);
    m.explained_variance_ratio << 0.6, 0.3, 0.1;
    const auto c = cumulative_variance(m);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == doctest::Approx(0.6));
    CHECK(c[1] == doctest::Approx(0.9));
    CHECK(c[2] == doctest::Approx(1.0));

    PcaModel one;
    one.explained_variance_ratio = Eigen::VectorXd::Ones(1);
    CHECK(cumulative_variance(one) == std::vector<double>{1.0});
}

TEST_CASE("PCA argument errors") {
    Rng rng(8);
    const auto x = random_matrix(rng, 10, 3);
    const auto m = fit_pca(x);
    CHECK_THROWS_AS((void)transform(m, x, 0), UsageError);
    CHECK_THROWS_AS((void)transform(m, x, 4), UsageError);
    CHECK_THROWS_AS((void)fit_pca(x.topRows(1)), UsageError);
    CHECK_THROWS_AS((void)fit_pca(Eigen::MatrixXd::Constant(5, 2, 3.0)),
                    DegenerateError);
}

TEST_CASE("chronological split keeps order") {
    Rng rng(9);
    const auto d = make_dataset(rng, 52, 3);
    const auto [train, test] = chronological_split(d, 40);
    CHECK(train.rows() == 40);
    CHECK(test.rows() == 12);
    CHECK(train.months.back() == d.months[39]);
    CHECK(test.months.front() == d.months[40]);
    CHECK(train.months.back() < test.months.front());
    CHECK(test.features.row(0) == d.features.row(40));
    CHECK(test.target.back() == d.target.back());
    CHECK_THROWS_AS((void)chronological_split(d, 52), UsageError);
    CHECK_THROWS_AS((void)chronological_split(d, 0), UsageError);
}

TEST_CASE("drop_missing_features removes only incomplete columns") {
    Rng rng(10);
    auto d = make_dataset(rng, 20, 5);
    CHECK(drop_missing_features(d).columns() == 5);
    mark_missing(d, 0, 1);
    mark_missing(d, 7, 3);
    mark_missing(d, 8, 3);
    const auto kept = drop_missing_features(d);
    CHECK(kept.rows() == 20);
    CHECK(kept.feature_names == std::vector<std::string>{"c0", "c2", "c4"});
    CHECK(kept.features.col(1) == d.features.col(2));
    CHECK_FALSE(kept.missing.any());

    for (Eigen::Index c = 0; c < 5; ++c) {
        mark_missing(d, 2, c);
    }
    CHECK_THROWS_AS((void)drop_missing_features(d), ValidationError);
}

TEST_CASE("dataset validation catches months out of order") {
    Rng rng(11);
    auto d = make_dataset(rng, 5, 2);
    CHECK_NOTHROW(d.validate());
    std::swap(d.months[1], d.months[2]);
    CHECK_THROWS_AS(d.validate(), ValidationError);
}

TEST_CASE("prepare standardizes from training rows only") {
    Rng rng(12);
    auto d = make_dataset(rng, 52, 8);
    mark_missing(d, 3, 5);
    PrepareOptions opt{.n_components = 4, .train_months = 40, .validation_months = 6};
    const auto p = prepare(d, opt);
    CHECK(p.rows() == 52);
    CHECK(p.n_features() == 4);
    CHECK(p.train_rows == 40);
    CHECK(p.fit_rows() == 34);
    CHECK(p.test_rows() == 12);
    CHECK(p.cumulative_variance.size() == 7);
    const Eigen::MatrixXd head = p.features.topRows(40);
    for (Eigen::Index c = 0; c < 4; ++c) {
        CHECK(std::abs(head.col(c).mean()) < 1e-10);
    }
    const std::vector<double> train_target(p.target_std.begin(),
                                           p.target_std.begin() + 40);
    double mean = 0.0;
    for (double v : train_target) {
        mean += v / 40.0;
    }
    CHECK(std::abs(mean) < 1e-10);
    CHECK(std::abs(destandardize(p.target_scaler, p.target_std).back() -
                   d.target.back()) < 1e-9);

    // Changing a test month must not change anything fitted.
    auto changed = d;
    changed.features(50, 0) += 1e3;
    const auto q = prepare(changed, opt);
    CHECK(q.features.topRows(40) == p.features.topRows(40));

    opt.n_components = 7;
    const auto all = prepare(d, opt);
    CHECK(all.cumulative_variance.empty());
    opt.n_components = 8;
    CHECK_THROWS_AS((void)prepare(d, opt), ConfigError);
}

TEST_CASE("standardizing before PCA changes the components") {
    Rng rng(13);
    const auto d = make_dataset(rng, 52, 5);
    PrepareOptions opt{.n_components = 2};
    const auto raw = prepare(d, opt);
    opt.standardize_before_pca = true;
    const auto scaled = prepare(d, opt);
    CHECK((raw.features - scaled.features).cwiseAbs().maxCoeff() > 1e-3);
}
