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
 * QNN output, MAE loss and gradients.
 *
 * The model output is y = sum_i w_i <Z_i> + b over the state produced by
 * assemble(). Gradients are returned in ParameterVector shape.
 */
#pragma once

#include "qforecast/circuit.hpp"
#include "qforecast/statevector.hpp"

#include <span>
#include <vector>

namespace qforecast {

/// Runs the assembled circuit from |0...0>.
StateVector simulate(std::span<const double> x, const AnsatzConfig &config,
                     const ParameterVector &params);

/// Readout over a prepared state's expectations.
double readout(std::span<const double> z, const ParameterVector &params);

/// Model output in standardized target units.
double predict(std::span<const double> x, const AnsatzConfig &config,
               const ParameterVector &params);

/// (1/N) sum |prediction - target|; UsageError on empty or mismatched input.
double loss_mae(std::span<const double> predictions,
                std::span<const double> targets);

/// d|r|/dr with the value 0 at r == 0.
constexpr double mae_subgradient(double residual) {
    return residual > 0.0 ? 1.0 : (residual < 0.0 ? -1.0 : 0.0);
}

/// d(prediction)/d(params) by the +-pi/2 shift rule on every rotation.
ParameterVector output_gradient_parameter_shift(std::span<const double> x,
                                                const AnsatzConfig &config,
                                                const ParameterVector &params);

/// d(prediction)/d(params) by a forward pass and one reverse sweep.
ParameterVector output_gradient_adjoint(std::span<const double> x,
                                        const AnsatzConfig &config,
                                        const ParameterVector &params);

/// Gradient of |prediction - target| via the shift rule.
ParameterVector parameter_shift_gradient(std::span<const double> x,
                                         const AnsatzConfig &config,
                                         const ParameterVector &params,
                                         double target);

/// Gradient of |prediction - target| via adjoint differentiation.
ParameterVector adjoint_gradient(std::span<const double> x,
                                 const AnsatzConfig &config,
                                 const ParameterVector &params, double target);

} // namespace qforecast
