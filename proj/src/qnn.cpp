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

#include "qforecast/qnn.hpp"

#include "qforecast/errors.hpp"
#include "qforecast/kernels.hpp"

#include <cmath>
#include <numbers>

namespace qforecast {

namespace {

void check_inputs(std::span<const double> x, const AnsatzConfig &config,
                  const ParameterVector &params) {
    config.validate();
    params.validate(config);
    if (x.size() != static_cast<std::size_t>(config.n_qubits)) {
        throw UsageError("expected " + std::to_string(config.n_qubits) +
                         " features, got " + std::to_string(x.size()));
    }
}

ParameterVector scaled(ParameterVector g, double s) {
    for (auto &v : g.quantum) {
        v *= s;
    }
    for (auto &v : g.readout_weights) {
        v *= s;
    }
    g.readout_bias *= s;
    return g;
}

Mat2 generator(GateKind k) {
    switch (k) {
    case GateKind::RX:
        return gates::pauli_x();
    case GateKind::RY:
        return gates::pauli_y();
    case GateKind::RZ:
        return gates::pauli_z();
    default:
        throw UsageError("trainable gate must be a Pauli rotation");
    }
}

} // namespace

StateVector simulate(std::span<const double> x, const AnsatzConfig &config,
                     const ParameterVector &params) {
    check_inputs(x, config, params);
    const CircuitSpec c = assemble(x, config, params);
    StateVector s = zero_state(c.n_qubits);
    apply_circuit(s, c.gates);
    return s;
}

double readout(std::span<const double> z, const ParameterVector &params) {
    if (z.size() != params.readout_weights.size()) {
        throw UsageError("readout: " + std::to_string(z.size()) +
                         " expectations for " +
                         std::to_string(params.readout_weights.size()) +
                         " weights");
    }
    double y = params.readout_bias;
    for (std::size_t i = 0; i < z.size(); ++i) {
        y += params.readout_weights[i] * z[i];
    }
    return y;
}

double predict(std::span<const double> x, const AnsatzConfig &config,
               const ParameterVector &params) {
    const StateVector s = simulate(x, config, params);
    return readout(expval_z_all(s), params);
}

double loss_mae(std::span<const double> predictions,
                std::span<const double> targets) {
    if (predictions.empty()) {
        throw UsageError("loss_mae: empty input");
    }
    if (predictions.size() != targets.size()) {
        throw UsageError("loss_mae: " + std::to_string(predictions.size()) +
                         " predictions vs " + std::to_string(targets.size()) +
                         " targets");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        acc += std::abs(predictions[i] - targets[i]);
    }
    return acc / static_cast<double>(predictions.size());
}

ParameterVector output_gradient_parameter_shift(std::span<const double> x,
                                                const AnsatzConfig &config,
                                                const ParameterVector &params) {
    check_inputs(x, config, params);
    ParameterVector grad = ParameterVector::zeros(config);
    grad.readout_weights = expval_z_all(simulate(x, config, params));
    grad.readout_bias = 1.0;

    constexpr double shift = std::numbers::pi / 2.0;
    ParameterVector shifted = params;
    for (std::size_t k = 0; k < params.quantum.size(); ++k) {
        shifted.quantum[k] = params.quantum[k] + shift;
        const double plus = predict(x, config, shifted);
        shifted.quantum[k] = params.quantum[k] - shift;
        const double minus = predict(x, config, shifted);
        shifted.quantum[k] = params.quantum[k];
        // The bias cancels in the difference; the readout weights carry
        // through linearly.
        grad.quantum[k] = (plus - minus) / 2.0;
    }
    return grad;
}

ParameterVector output_gradient_adjoint(std::span<const double> x,
                                        const AnsatzConfig &config,
                                        const ParameterVector &params) {
    check_inputs(x, config, params);
    const CircuitSpec c = assemble(x, config, params);
    StateVector psi = zero_state(c.n_qubits);
    apply_circuit(psi, c.gates);

    ParameterVector grad = ParameterVector::zeros(config);
    grad.readout_weights = expval_z_all(psi);
    grad.readout_bias = 1.0;

    // lambda = O |psi> with O = sum_i w_i Z_i (diagonal).
    StateVector lambda = psi;
    {
        auto amps = lambda.amplitudes();
        for (std::size_t j = 0; j < amps.size(); ++j) {
            double o = 0.0;
            for (int q = 0; q < c.n_qubits; ++q) {
                const double w = params.readout_weights[static_cast<std::size_t>(q)];
                o += ((j >> q) & 1U) ? -w : w;
            }
            amps[j] *= o;
        }
    }

    // gate index -> slot, walking slots backwards alongside the gates.
    std::ptrdiff_t slot = static_cast<std::ptrdiff_t>(c.parameter_slots.size()) - 1;
    const std::size_t first_trainable =
        c.parameter_slots.empty() ? c.gates.size()
                                  : c.parameter_slots.front().gate_index;
    for (std::size_t k = c.gates.size(); k-- > first_trainable;) {
        const Gate &g = c.gates[k];
        if (slot >= 0 &&
            c.parameter_slots[static_cast<std::size_t>(slot)].gate_index == k) {
            // dG/dtheta = -(i/2) P G, so d<O>/dtheta = Im <lambda| P |psi>
            // with both states taken just after G.
            StateVector p_psi = psi;
            kernels::serial::apply_1q(p_psi.amplitudes(), g.target,
                                      generator(g.kind));
            Complex inner{0.0, 0.0};
            for (std::size_t j = 0; j < psi.size(); ++j) {
                inner += std::conj(lambda[j]) * p_psi[j];
            }
            grad.quantum[static_cast<std::size_t>(slot)] = inner.imag();
            --slot;
        }
        const Gate inv = g.adjoint();
        apply_gate(psi, inv);
        apply_gate(lambda, inv);
    }
    return grad;
}

ParameterVector parameter_shift_gradient(std::span<const double> x,
                                         const AnsatzConfig &config,
                                         const ParameterVector &params,
                                         double target) {
    const double r = predict(x, config, params) - target;
    return scaled(output_gradient_parameter_shift(x, config, params),
                  mae_subgradient(r));
}

ParameterVector adjoint_gradient(std::span<const double> x,
                                 const AnsatzConfig &config,
                                 const ParameterVector &params, double target) {
    const double r = predict(x, config, params) - target;
    return scaled(output_gradient_adjoint(x, config, params),
                  mae_subgradient(r));
}

} // namespace qforecast
