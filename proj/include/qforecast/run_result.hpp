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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qforecast {

/// Outcome of one seeded training run. Quantum and recurrent models fill
/// the same fields so reporting code treats them alike.
struct RunResult {
    // Configuration echo.
    std::string model;      ///< "qnn", "rnn128", ...
    int n_features = 0;
    int n_layers = 0;       ///< QNN only
    std::string topology;   ///< QNN only
    int hidden_units = 0;   ///< RNN only
    int epochs = 0;
    double learning_rate = 0.0;
    std::uint64_t seed = 0;
    std::size_t trainable_parameters = 0;

    /// MAE in standardized target units before the first update.
    double initial_train_mae = 0.0;
    double initial_validation_mae = 0.0;
    /// MAE in standardized units after each epoch's update; length = epochs.
    std::vector<double> train_mae;
    std::vector<double> validation_mae;
    /// One prediction per test month, original target units.
    std::vector<double> test_predictions;
    double wall_seconds = 0.0;
};

} // namespace qforecast
