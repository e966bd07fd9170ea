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

#include "qforecast/training.hpp"

#include "qforecast/errors.hpp"
#include "qforecast/layered_qnn.hpp"
#include "qforecast/qnn.hpp"
#include "qforecast/rng.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace qforecast {

void adam_step(AdamState &state, std::span<double> params,
               std::span<const double> grads) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw UsageError("adam_step: " + std::to_string(params.size()) +
                         " params, " + std::to_string(grads.size()) +
                         " grads, state for " + std::to_string(state.m.size()));
    }
    const auto &c = state.config;
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double correct1 = 1.0 - std::pow(c.beta1, t);
    const double correct2 = 1.0 - std::pow(c.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * grads[i];
        state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * grads[i] * grads[i];
        const double m_hat = state.m[i] / correct1;
        const double v_hat = state.v[i] / correct2;
        params[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
}

void TrainConfig::validate() const {
    if (epochs < 1) {
        throw ConfigError("epochs must be >= 1, got " + std::to_string(epochs));
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw ConfigError("learning rate must be positive");
    }
}

ParameterVector initial_parameters(const AnsatzConfig &config,
                                   const TrainConfig &train_cfg) {
    ParameterVector p = ParameterVector::zeros(config);
    if (train_cfg.init == InitScheme::Zero) {
        return p;
    }
    Rng rng(train_cfg.seed);
    for (auto &a : p.quantum) {
        a = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    for (auto &w : p.readout_weights) {
        w = rng.uniform(-0.1, 0.1);
    }
    return p;
}

namespace {

std::span<const double> row_of(const Eigen::MatrixXd &m, Eigen::Index r,
                               std::vector<double> &buf) {
    buf.resize(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        buf[static_cast<std::size_t>(c)] = m(r, c);
    }
    return buf;
}

double evaluate_mae(LayeredQnn &engine, const PreparedData &data,
                    std::size_t begin, std::size_t end,
                    const ParameterVector &params) {
    std::vector<double> x;
    double acc = 0.0;
    for (std::size_t r = begin; r < end; ++r) {
        const double y =
            engine.forward(row_of(data.features, static_cast<Eigen::Index>(r), x), params);
        acc += std::abs(y - data.target_std[r]);
    }
    return acc / static_cast<double>(end - begin);
}

} // namespace

RunResult train(const PreparedData &data, const AnsatzConfig &config,
                const TrainConfig &train_cfg) {
    const auto started = std::chrono::steady_clock::now();
    config.validate();
    train_cfg.validate();
    if (data.n_features() != config.n_qubits) {
        throw UsageError("data has " + std::to_string(data.n_features()) +
                         " features but the ansatz has " +
                         std::to_string(config.n_qubits) + " qubits");
    }
    if (data.fit_rows() < 1 || data.validation_rows < 1) {
        throw UsageError("need at least one fit row and one validation row");
    }

    RunResult result;
    result.model = "qnn";
    result.n_features = config.n_qubits;
    result.n_layers = config.n_layers;
    result.topology = to_string(config.topology);
    result.epochs = train_cfg.epochs;
    result.learning_rate = train_cfg.learning_rate;
    result.seed = train_cfg.seed;
    result.trainable_parameters = config.trainable_parameter_count();

    LayeredQnn engine(config);
    ParameterVector params = initial_parameters(config, train_cfg);
    std::vector<double> flat = params.flatten();
    AdamState adam(AdamConfig{.learning_rate = train_cfg.learning_rate},
                   flat.size());

    const std::size_t fit = data.fit_rows();
    const double inv_n = 1.0 / static_cast<double>(fit);
    result.initial_validation_mae =
        evaluate_mae(engine, data, fit, data.train_rows, params);

    std::vector<double> x;
    for (int epoch = 0; epoch < train_cfg.epochs; ++epoch) {
        ParameterVector grad = ParameterVector::zeros(config);
        double loss = 0.0;
        for (std::size_t r = 0; r < fit; ++r) {
            const double y = engine.forward(
                row_of(data.features, static_cast<Eigen::Index>(r), x), params);
            const double residual = y - data.target_std[r];
            loss += std::abs(residual);
            engine.backward(params, mae_subgradient(residual) * inv_n, grad);
        }
        loss *= inv_n;
        if (!std::isfinite(loss)) {
            throw DivergenceError("qnn seed " + std::to_string(train_cfg.seed) +
                                  ": non-finite training loss at epoch " +
                                  std::to_string(epoch + 1));
        }
        // The gradient pass measures the parameters *before* this update.
        if (epoch == 0) {
            result.initial_train_mae = loss;
        } else {
            result.train_mae.push_back(loss);
        }

        const std::vector<double> g = grad.flatten();
        adam_step(adam, flat, g);
        params = ParameterVector::unflatten(config, flat);

        result.validation_mae.push_back(
            evaluate_mae(engine, data, fit, data.train_rows, params));
    }
    result.train_mae.push_back(evaluate_mae(engine, data, 0, fit, params));

    std::vector<double> preds_std;
    for (std::size_t r = data.train_rows; r < data.rows(); ++r) {
        preds_std.push_back(engine.forward(
            row_of(data.features, static_cast<Eigen::Index>(r), x), params));
    }
    result.test_predictions = destandardize(data.target_scaler, preds_std);
    for (double v : result.validation_mae) {
        if (!std::isfinite(v)) {
            throw DivergenceError("qnn seed " + std::to_string(train_cfg.seed) +
                                  ": non-finite validation loss");
        }
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    return result;
}

} // namespace qforecast
