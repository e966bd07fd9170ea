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

#include "qforecast/circuit.hpp"

#include "qforecast/errors.hpp"

#include <algorithm>
#include <cmath>

namespace qforecast {

const char *to_string(EntanglementTopology t) {
    switch (t) {
    case EntanglementTopology::PairsThenTie:
        return "PairsThenTie";
    case EntanglementTopology::CascadeRing:
        return "CascadeRing";
    }
    return "?";
}

EntanglementTopology parse_topology(std::string_view name) {
    if (name == "PairsThenTie" || name == "pairs") {
        return EntanglementTopology::PairsThenTie;
    }
    if (name == "CascadeRing" || name == "cascade") {
        return EntanglementTopology::CascadeRing;
    }
    throw ConfigError("unknown entanglement topology '" + std::string(name) +
                      "' (expected PairsThenTie or CascadeRing)");
}

void AnsatzConfig::validate() const {
    if (n_qubits < 2 || n_qubits > kMaxQubits) {
        throw ConfigError("ansatz needs 2.." + std::to_string(kMaxQubits) +
                          " qubits, got " + std::to_string(n_qubits));
    }
    if (n_layers < 1) {
        throw ConfigError("ansatz needs at least one layer, got " +
                          std::to_string(n_layers));
    }
    if (!std::isfinite(input_scale)) {
        throw ConfigError("input_scale must be finite");
    }
}

ParameterVector ParameterVector::zeros(const AnsatzConfig &config) {
    config.validate();
    ParameterVector p;
    p.quantum.assign(config.quantum_parameter_count(), 0.0);
    p.readout_weights.assign(static_cast<std::size_t>(config.n_qubits), 0.0);
    return p;
}

std::vector<double> ParameterVector::flatten() const {
    std::vector<double> flat;
    flat.reserve(quantum.size() + readout_weights.size() + 1);
    flat.insert(flat.end(), quantum.begin(), quantum.end());
    flat.insert(flat.end(), readout_weights.begin(), readout_weights.end());
    flat.push_back(readout_bias);
    return flat;
}

ParameterVector ParameterVector::unflatten(const AnsatzConfig &config,
                                           std::span<const double> flat) {
    config.validate();
    const std::size_t nq = config.quantum_parameter_count();
    const std::size_t nw = static_cast<std::size_t>(config.n_qubits);
    if (flat.size() != nq + nw + 1) {
        throw UsageError("flat parameter vector has " +
                         std::to_string(flat.size()) + " entries, expected " +
                         std::to_string(nq + nw + 1));
    }
    ParameterVector p;
    p.quantum.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(nq));
    p.readout_weights.assign(flat.begin() + static_cast<std::ptrdiff_t>(nq),
                             flat.begin() + static_cast<std::ptrdiff_t>(nq + nw));
    p.readout_bias = flat.back();
    return p;
}

void ParameterVector::validate(const AnsatzConfig &config) const {
    if (quantum.size() != config.quantum_parameter_count()) {
        throw UsageError("expected " +
                         std::to_string(config.quantum_parameter_count()) +
                         " rotation angles, got " +
                         std::to_string(quantum.size()));
    }
    if (readout_weights.size() != static_cast<std::size_t>(config.n_qubits)) {
        throw UsageError("expected " + std::to_string(config.n_qubits) +
                         " readout weights, got " +
                         std::to_string(readout_weights.size()));
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(quantum.begin(), quantum.end(), finite) ||
        !std::all_of(readout_weights.begin(), readout_weights.end(), finite) ||
        !std::isfinite(readout_bias)) {
        throw UsageError("parameter vector contains non-finite values");
    }
}

std::vector<Gate> build_feature_map(std::span<const double> x, int n_qubits,
                                    double input_scale) {
    if (x.size() != static_cast<std::size_t>(n_qubits)) {
        throw UsageError("feature map: got " + std::to_string(x.size()) +
                         " features for " + std::to_string(n_qubits) +
                         " qubits");
    }
    std::vector<Gate> out;
    out.reserve(2 * x.size());
    for (int q = 0; q < n_qubits; ++q) {
        out.push_back(Gate::h(q));
    }
    for (int q = 0; q < n_qubits; ++q) {
        out.push_back(Gate::ry(q, input_scale * x[static_cast<std::size_t>(q)]));
    }
    return out;
}

std::vector<Gate> build_entanglement(EntanglementTopology topology,
                                     int n_qubits) {
    if (n_qubits < 2) {
        throw ConfigError("entanglement needs at least 2 qubits, got " +
                          std::to_string(n_qubits));
    }
    std::vector<Gate> out;
    switch (topology) {
    case EntanglementTopology::PairsThenTie:
        for (int q = 0; q + 1 < n_qubits; q += 2) {
            out.push_back(Gate::cnot(q, q + 1));
        }
        for (int q = 1; q + 1 < n_qubits; q += 2) {
            out.push_back(Gate::cnot(q, q + 1));
        }
        break;
    case EntanglementTopology::CascadeRing:
        for (int q = 0; q + 1 < n_qubits; ++q) {
            out.push_back(Gate::cnot(q, q + 1));
        }
        out.push_back(Gate::cnot(n_qubits - 1, 0));
        break;
    }
    return out;
}

CircuitSpec build_ansatz(const AnsatzConfig &config,
                         const ParameterVector &params) {
    config.validate();
    params.validate(config);
    const int n = config.n_qubits;
    const auto ent = build_entanglement(config.topology, n);

    CircuitSpec c;
    c.n_qubits = n;
    c.gates.reserve(static_cast<std::size_t>(config.n_layers) *
                    (ent.size() + 3 * static_cast<std::size_t>(n)));
    c.parameter_slots.reserve(config.quantum_parameter_count());
    for (int layer = 0; layer < config.n_layers; ++layer) {
        c.gates.insert(c.gates.end(), ent.begin(), ent.end());
        for (int q = 0; q < n; ++q) {
            const auto at = [&](Axis a) {
                return params.quantum[angle_index(layer, q, a, n)];
            };
            c.parameter_slots.push_back({c.gates.size(), Axis::X});
            c.gates.push_back(Gate::rx(q, at(Axis::X)));
            c.parameter_slots.push_back({c.gates.size(), Axis::Y});
            c.gates.push_back(Gate::ry(q, at(Axis::Y)));
            c.parameter_slots.push_back({c.gates.size(), Axis::Z});
            c.gates.push_back(Gate::rz(q, at(Axis::Z)));
        }
    }
    return c;
}

CircuitSpec assemble(std::span<const double> x, const AnsatzConfig &config,
                     const ParameterVector &params) {
    config.validate();
    CircuitSpec body = build_ansatz(config, params);
    CircuitSpec c;
    c.n_qubits = config.n_qubits;
    c.gates = build_feature_map(x, config.n_qubits, config.input_scale);
    const std::size_t offset = c.gates.size();
    c.gates.insert(c.gates.end(), body.gates.begin(), body.gates.end());
    c.parameter_slots = std::move(body.parameter_slots);
    for (auto &slot : c.parameter_slots) {
        slot.gate_index += offset;
    }
    return c;
}

std::string dump(const CircuitSpec &circuit) {
    std::string out = "# qubits " + std::to_string(circuit.n_qubits) +
                      ", gates " + std::to_string(circuit.gates.size()) +
                      ", trainable " +
                      std::to_string(circuit.parameter_slots.size()) + "\n";
    std::vector<bool> trainable(circuit.gates.size(), false);
    for (const auto &s : circuit.parameter_slots) {
        trainable[s.gate_index] = true;
    }
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        out += to_string(circuit.gates[i]);
        if (trainable[i]) {
            out += " *";
        }
        out += '\n';
    }
    return out;
}

} // namespace qforecast
