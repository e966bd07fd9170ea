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
 * Elman recurrent baseline on sliding windows of monthly feature vectors:
 *   h_t = tanh(W_x x_t + W_h h_{t-1} + b_h),  h_0 = 0
 *   y   = w_o . h_T + b_o
 */
#pragma once

#include "qforecast/pipeline.hpp"
#include "qforecast/run_result.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace qforecast {

struct RnnConfig {
    int hidden_units = 128;
    int window = 12;
    int epochs = 30;
    double learning_rate = 0.01;
    std::uint64_t seed = 0;

    void validate() const;
};

/// hidden * (features + hidden + 1) + hidden + 1
constexpr std::size_t rnn_parameter_count(int hidden, int features) {
    const auto h = static_cast<std::size_t>(hidden);
    const auto f = static_cast<std::size_t>(features);
    return h * (f + h + 1) + h + 1;
}

/**
 * All weights in one flat buffer (so Adam and finite differences see a
 * plain vector) with matrix views on top. Layout: W_x (column-major
 * hidden x features), W_h (hidden x hidden), b_h, w_o, b_o.
 */
class RnnWeights {
  public:
    using MatMap = Eigen::Map<Eigen::MatrixXd>;
    using ConstMatMap = Eigen::Map<const Eigen::MatrixXd>;
    using VecMap = Eigen::Map<Eigen::VectorXd>;
    using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

    RnnWeights(int hidden, int features);

    /// U(-1/sqrt(fan_in), 1/sqrt(fan_in)); fan_in is features + hidden for
    /// the recurrent cell and hidden for the output layer.
    static RnnWeights initialise(int hidden, int features, std::uint64_t seed);

    [[nodiscard]] int hidden() const noexcept { return hidden_; }
    [[nodiscard]] int features() const noexcept { return features_; }

    MatMap w_x();
    MatMap w_h();
    VecMap b_h();
    VecMap w_o();
    double &b_o() { return flat_.back(); }
    [[nodiscard]] ConstMatMap w_x() const;
    [[nodiscard]] ConstMatMap w_h() const;
    [[nodiscard]] ConstVecMap b_h() const;
    [[nodiscard]] ConstVecMap w_o() const;
    [[nodiscard]] double b_o() const { return flat_.back(); }

    std::vector<double> &flat() noexcept { return flat_; }
    [[nodiscard]] const std::vector<double> &flat() const noexcept {
        return flat_;
    }

  private:
    int hidden_;
    int features_;
    std::vector<double> flat_;
};

/// `window` holds one time step per row (oldest first).
double rnn_forward(const Eigen::MatrixXd &window, const RnnWeights &weights);

/// Windows ending at rows `ends` of `features`, each `length` rows long.
/// Returns the predictions and, when `grad` is non-null, writes the
/// gradient of mean |prediction - target| into it (same layout as flat()).
std::vector<double> rnn_batch(const Eigen::MatrixXd &features,
                              std::span<const std::size_t> ends, int length,
                              const RnnWeights &weights,
                              std::span<const double> targets,
                              std::vector<double> *grad);

/// BPTT + Adam on the MAE over windows ending in the fit rows.
RunResult rnn_train(const PreparedData &data, const RnnConfig &cfg);

} // namespace qforecast
