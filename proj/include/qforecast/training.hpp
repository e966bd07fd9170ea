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
 * Adam and the QNN training loop.
 */
#pragma once

#include "qforecast/circuit.hpp"
#include "qforecast/pipeline.hpp"
#include "qforecast/run_result.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qforecast {

struct AdamConfig {
    double learning_rate = 0.05;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Moment estimates for a flat parameter vector.
struct AdamState {
    AdamConfig config;
    std::uint64_t step = 0;
    std::vector<double> m;
    std::vector<double> v;

    AdamState(AdamConfig cfg, std::size_t n_params)
        : config(cfg), m(n_params, 0.0), v(n_params, 0.0) {}
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(AdamState &state, std::span<double> params,
               std::span<const double> grads);

enum class InitScheme : std::uint8_t {
    /// angles U[-pi, pi), readout weights U[-0.1, 0.1), bias 0
    UniformAngles,
    /// everything zero; for tests
    Zero,
};

struct TrainConfig {
    int epochs = 30;
    double learning_rate = 0.05;
    std::uint64_t seed = 0;
    InitScheme init = InitScheme::UniformAngles;

    void validate() const;
};

ParameterVector initial_parameters(const AnsatzConfig &config,
                                   const TrainConfig &train_cfg);

/**
 * Full-batch Adam on the MAE over the fit rows of `data`.
 *
 * Losses are in standardized target units; test predictions are
 * destandardized. Throws DivergenceError on a non-finite loss.
 */
RunResult train(const PreparedData &data, const AnsatzConfig &config,
                const TrainConfig &train_cfg);

} // namespace qforecast
