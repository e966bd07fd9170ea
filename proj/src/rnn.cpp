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

#include "qforecast/rnn.hpp"

#include "qforecast/errors.hpp"
#include "qforecast/qnn.hpp"
#include "qforecast/rng.hpp"
#include "qforecast/training.hpp"

#include <chrono>
#include <cmath>

namespace qforecast {

void RnnConfig::validate() const {
    if (hidden_units < 1) {
        throw ConfigError("hidden_units must be >= 1");
    }
    if (window < 1) {
        throw ConfigError("window must be >= 1");
    }
    if (epochs < 1) {
        throw ConfigError("epochs must be >= 1");
    }
    if (!(learning_rate > 0.0)) {
        throw ConfigError("learning rate must be positive");
    }
}

RnnWeights::RnnWeights(int hidden, int features)
    : hidden_(hidden), features_(features),
      flat_(rnn_parameter_count(hidden, features), 0.0) {
    if (hidden < 1 || features < 1) {
        throw ConfigError("RNN needs at least one hidden unit and one feature");
    }
}

RnnWeights RnnWeights::initialise(int hidden, int features, std::uint64_t seed) {
    RnnWeights w(hidden, features);
    Rng rng(seed);
    const double cell = 1.0 / std::sqrt(static_cast<double>(features + hidden));
    const double out = 1.0 / std::sqrt(static_cast<double>(hidden));
    const std::size_t cell_params =
        static_cast<std::size_t>(hidden) *
        static_cast<std::size_t>(features + hidden + 1);
    for (std::size_t i = 0; i < w.flat_.size(); ++i) {
        const double bound = i < cell_params ? cell : out;
        w.flat_[i] = rng.uniform(-bound, bound);
    }
    return w;
}

namespace {
std::size_t off_wh(int h, int f) { return static_cast<std::size_t>(h) * static_cast<std::size_t>(f); }
std::size_t off_bh(int h, int f) { return off_wh(h, f) + static_cast<std::size_t>(h) * static_cast<std::size_t>(h); }
std::size_t off_wo(int h, int f) { return off_bh(h, f) + static_cast<std::size_t>(h); }
} // namespace

RnnWeights::MatMap RnnWeights::w_x() { return {flat_.data(), hidden_, features_}; }
RnnWeights::MatMap RnnWeights::w_h() {
    return {flat_.data() + off_wh(hidden_, features_), hidden_, hidden_};
}
RnnWeights::VecMap RnnWeights::b_h() {
    return {flat_.data() + off_bh(hidden_, features_), hidden_};
}
RnnWeights::VecMap RnnWeights::w_o() {
    return {flat_.data() + off_wo(hidden_, features_), hidden_};
}
RnnWeights::ConstMatMap RnnWeights::w_x() const {
    return {flat_.data(), hidden_, features_};
}
RnnWeights::ConstMatMap RnnWeights::w_h() const {
    return {flat_.data() + off_wh(hidden_, features_), hidden_, hidden_};
}
RnnWeights::ConstVecMap RnnWeights::b_h() const {
    return {flat_.data() + off_bh(hidden_, features_), hidden_};
}
RnnWeights::ConstVecMap RnnWeights::w_o() const {
    return {flat_.data() + off_wo(hidden_, features_), hidden_};
}

double rnn_forward(const Eigen::MatrixXd &window, const RnnWeights &weights) {
    if (window.cols() != weights.features()) {
        throw UsageError("rnn_forward: window has " +
                         std::to_string(window.cols()) + " features, weights " +
                         std::to_string(weights.features()));
    }
    if (window.rows() < 1) {
        throw UsageError("rnn_forward: empty window");
    }
    Eigen::VectorXd h = Eigen::VectorXd::Zero(weights.hidden());
    for (Eigen::Index t = 0; t < window.rows(); ++t) {
        h = (weights.w_x() * window.row(t).transpose() + weights.w_h() * h +
             weights.b_h())
                .array()
                .tanh();
    }
    return weights.w_o().dot(h) + weights.b_o();
}

std::vector<double> rnn_batch(const Eigen::MatrixXd &features,
                              std::span<const std::size_t> ends, int length,
                              const RnnWeights &weights,
                              std::span<const double> targets,
                              std::vector<double> *grad) {
    if (features.cols() != weights.features()) {
        throw UsageError("rnn_batch: feature count mismatch");
    }
    const auto batch = static_cast<Eigen::Index>(ends.size());
    const int hidden = weights.hidden();
    for (std::size_t e : ends) {
        if (e + 1 < static_cast<std::size_t>(length) ||
            e >= static_cast<std::size_t>(features.rows())) {
            throw UsageError("rnn_batch: window ending at row " +
                             std::to_string(e) + " does not fit");
        }
    }

    // states[t] is hidden x batch after step t; states[0] = h_0 = 0.
    std::vector<Eigen::MatrixXd> states(static_cast<std::size_t>(length) + 1);
    std::vector<Eigen::MatrixXd> inputs(static_cast<std::size_t>(length));
    states[0] = Eigen::MatrixXd::Zero(hidden, batch);
    for (int t = 0; t < length; ++t) {
        Eigen::MatrixXd x(features.cols(), batch);
        for (Eigen::Index b = 0; b < batch; ++b) {
            const auto row = static_cast<Eigen::Index>(ends[static_cast<std::size_t>(b)]) -
                             (length - 1) + t;
            x.col(b) = features.row(row).transpose();
        }
        Eigen::MatrixXd pre = weights.w_x() * x + weights.w_h() * states[static_cast<std::size_t>(t)];
        pre.colwise() += weights.b_h();
        states[static_cast<std::size_t>(t) + 1] = pre.array().tanh();
        inputs[static_cast<std::size_t>(t)] = std::move(x);
    }
    const Eigen::RowVectorXd y =
        (weights.w_o().transpose() * states.back()).array() + weights.b_o();
    std::vector<double> preds(y.data(), y.data() + y.size());
    if (grad == nullptr) {
        return preds;
    }
    if (targets.size() != ends.size()) {
        throw UsageError("rnn_batch: target count mismatch");
    }

    RnnWeights g(hidden, weights.features());
    Eigen::RowVectorXd dy(batch);
    for (Eigen::Index b = 0; b < batch; ++b) {
        dy(b) = mae_subgradient(preds[static_cast<std::size_t>(b)] -
                                targets[static_cast<std::size_t>(b)]) /
                static_cast<double>(batch);
    }
    g.w_o() = states.back() * dy.transpose();
    g.b_o() = dy.sum();
    Eigen::MatrixXd dh = weights.w_o() * dy;
    for (int t = length - 1; t >= 0; --t) {
        const auto &h = states[static_cast<std::size_t>(t) + 1];
        const Eigen::MatrixXd da = dh.array() * (1.0 - h.array().square());
        g.w_x() += da * inputs[static_cast<std::size_t>(t)].transpose();
        g.w_h() += da * states[static_cast<std::size_t>(t)].transpose();
        g.b_h() += da.rowwise().sum();
        if (t > 0) {
            dh = weights.w_h().transpose() * da;
        }
    }
    *grad = std::move(g.flat());
    return preds;
}

namespace {

double mae_of(const std::vector<double> &p, std::span<const double> y) {
    return loss_mae(p, y);
}

} // namespace

RunResult rnn_train(const PreparedData &data, const RnnConfig &cfg) {
    const auto started = std::chrono::steady_clock::now();
    cfg.validate();
    const std::size_t window = static_cast<std::size_t>(cfg.window);
    if (data.fit_rows() < window) {
        throw UsageError("RNN window of " + std::to_string(window) +
                         " months does not fit in " +
                         std::to_string(data.fit_rows()) + " fit rows");
    }

    std::vector<std::size_t> fit_ends, val_ends, test_ends;
    std::vector<double> fit_y, val_y;
    for (std::size_t r = window - 1; r < data.fit_rows(); ++r) {
        fit_ends.push_back(r);
        fit_y.push_back(data.target_std[r]);
    }
    for (std::size_t r = data.fit_rows(); r < data.train_rows; ++r) {
        val_ends.push_back(r);
        val_y.push_back(data.target_std[r]);
    }
    for (std::size_t r = data.train_rows; r < data.rows(); ++r) {
        test_ends.push_back(r);
    }

    RunResult result;
    result.model = "rnn" + std::to_string(cfg.hidden_units);
    result.n_features = data.n_features();
    result.hidden_units = cfg.hidden_units;
    result.epochs = cfg.epochs;
    result.learning_rate = cfg.learning_rate;
    result.seed = cfg.seed;
    result.trainable_parameters =
        rnn_parameter_count(cfg.hidden_units, data.n_features());

    RnnWeights w = RnnWeights::initialise(cfg.hidden_units, data.n_features(), cfg.seed);
    AdamState adam(AdamConfig{.learning_rate = cfg.learning_rate}, w.flat().size());
    const int len = cfg.window;
    auto validate_loss = [&](double v, int epoch) {
        if (!std::isfinite(v)) {
            throw DivergenceError(result.model + " seed " + std::to_string(cfg.seed) +
                                  ": non-finite loss at epoch " +
                                  std::to_string(epoch));
        }
        return v;
    };
    result.initial_validation_mae =
        mae_of(rnn_batch(data.features, val_ends, len, w, {}, nullptr), val_y);

    std::vector<double> grad;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto preds = rnn_batch(data.features, fit_ends, len, w, fit_y, &grad);
        const double loss = validate_loss(mae_of(preds, fit_y), epoch + 1);
        if (epoch == 0) {
            result.initial_train_mae = loss;
        } else {
            result.train_mae.push_back(loss);
        }
        adam_step(adam, w.flat(), grad);
        result.validation_mae.push_back(validate_loss(
            mae_of(rnn_batch(data.features, val_ends, len, w, {}, nullptr), val_y),
            epoch + 1));
    }
    result.train_mae.push_back(validate_loss(
        mae_of(rnn_batch(data.features, fit_ends, len, w, {}, nullptr), fit_y),
        cfg.epochs));

    const auto test_std = rnn_batch(data.features, test_ends, len, w, {}, nullptr);
    result.test_predictions = destandardize(data.target_scaler, test_std);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    return result;
}

} // namespace qforecast
