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
 * Construction of the forecasting circuit: a Hadamard + RY angle-encoding
 * feature map followed by L ansatz layers. Each layer is one entanglement
 * pattern then a rotation R(theta, phi, omega) = RZ(omega) RY(phi) RX(theta)
 * on every qubit (RX applied first).
 */
#pragma once

#include "qforecast/statevector.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qforecast {

enum class EntanglementTopology : std::uint8_t {
    /// CNOTs on (0,1), (2,3), ... then (1,2), (3,4), ... tying the pairs.
    PairsThenTie,
    /// CNOTs (0,1), (1,2), ..., (n-2,n-1) closed by (n-1,0).
    CascadeRing,
};

const char *to_string(EntanglementTopology t);
/// Accepts "PairsThenTie"/"pairs" and "CascadeRing"/"cascade".
EntanglementTopology parse_topology(std::string_view name);

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

struct AnsatzConfig {
    int n_qubits = 4;
    int n_layers = 1;
    EntanglementTopology topology = EntanglementTopology::PairsThenTie;
    /// Multiplier applied to features before they become RY angles.
    double input_scale = 1.0;

    /// ConfigError unless n_qubits in [2, kMaxQubits] and n_layers >= 1.
    void validate() const;

    [[nodiscard]] std::size_t quantum_parameter_count() const {
        return 3 * static_cast<std::size_t>(n_qubits) *
               static_cast<std::size_t>(n_layers);
    }
    /// Rotation angles plus readout weights and bias.
    [[nodiscard]] std::size_t trainable_parameter_count() const {
        return quantum_parameter_count() + static_cast<std::size_t>(n_qubits) +
               1;
    }
};

/// Flat position of angle (layer, qubit, axis): [layer][qubit][axis].
constexpr std::size_t angle_index(int layer, int qubit, Axis axis,
                                  int n_qubits) {
    return (static_cast<std::size_t>(layer) * static_cast<std::size_t>(n_qubits) +
            static_cast<std::size_t>(qubit)) * 3 +
           static_cast<std::size_t>(axis);
}

/**
 * Trainable parameters of the model. `quantum` follows angle_index();
 * the readout maps per-qubit <Z_i> to a scalar: y = sum_i w_i <Z_i> + b.
 */
struct ParameterVector {
    std::vector<double> quantum;
    std::vector<double> readout_weights;
    double readout_bias = 0.0;

    static ParameterVector zeros(const AnsatzConfig &config);

    /// Flat layout: quantum angles, then readout weights, then bias.
    [[nodiscard]] std::vector<double> flatten() const;
    static ParameterVector unflatten(const AnsatzConfig &config,
                                     std::span<const double> flat);

    /// UsageError on a shape mismatch or non-finite entry.
    void validate(const AnsatzConfig &config) const;

    friend bool operator==(const ParameterVector &,
                           const ParameterVector &) = default;
};

/// Marks gate `gate_index` as carrying trainable angle number `slot`
/// (position in the slot list == position in ParameterVector::quantum).
struct ParameterSlot {
    std::size_t gate_index;
    Axis axis;
    friend bool operator==(const ParameterSlot &,
                           const ParameterSlot &) = default;
};

struct CircuitSpec {
    int n_qubits = 0;
    std::vector<Gate> gates;
    std::vector<ParameterSlot> parameter_slots;
};

/// [H q0 .. H q(n-1)] then [RY(scale * x_i) q_i].
std::vector<Gate> build_feature_map(std::span<const double> x, int n_qubits,
                                    double input_scale = 1.0);

std::vector<Gate> build_entanglement(EntanglementTopology topology,
                                     int n_qubits);

CircuitSpec build_ansatz(const AnsatzConfig &config,
                         const ParameterVector &params);

/// Feature map followed by the ansatz; slots are re-indexed accordingly.
CircuitSpec assemble(std::span<const double> x, const AnsatzConfig &config,
                     const ParameterVector &params);

/// One gate per line, stable format (see to_string(const Gate&)).
std::string dump(const CircuitSpec &circuit);

} // namespace qforecast
