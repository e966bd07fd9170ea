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

#include "qforecast/statevector.hpp"

#include "qforecast/errors.hpp"
#include "qforecast/kernels.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace qforecast {

namespace gates {

Mat2 hadamard() {
    const double r = std::numbers::sqrt2 / 2.0;
    return {r, r, r, -r};
}
Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
Mat2 pauli_y() { return {0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0}; }
Mat2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

Mat2 rx(double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    return {c, Complex{0.0, -s}, Complex{0.0, -s}, c};
}

Mat2 ry(double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    return {c, -s, s, c};
}

Mat2 rz(double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    return {Complex{c, -s}, 0.0, 0.0, Complex{c, s}};
}

} // namespace gates

const char *to_string(GateKind kind) {
    switch (kind) {
    case GateKind::H:
        return "H";
    case GateKind::RX:
        return "RX";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::CNOT:
        return "CNOT";
    }
    return "?";
}

Gate Gate::adjoint() const {
    Gate g = *this;
    if (is_rotation(kind)) {
        g.angle = -angle;
    }
    return g;
}

Mat2 Gate::matrix() const {
    switch (kind) {
    case GateKind::H:
        return gates::hadamard();
    case GateKind::RX:
        return gates::rx(angle);
    case GateKind::RY:
        return gates::ry(angle);
    case GateKind::RZ:
        return gates::rz(angle);
    case GateKind::CNOT:
        break;
    }
    throw UsageError("CNOT has no single-qubit matrix");
}

void Gate::validate(int n_qubits) const {
    if (target < 0 || target >= n_qubits) {
        throw UsageError(std::string(qforecast::to_string(kind)) +
                         ": target qubit " + std::to_string(target) +
                         " out of range for " + std::to_string(n_qubits) +
                         " qubits");
    }
    if (kind == GateKind::CNOT) {
        if (control < 0 || control >= n_qubits) {
            throw UsageError("CNOT: control qubit " + std::to_string(control) +
                             " out of range for " + std::to_string(n_qubits) +
                             " qubits");
        }
        if (control == target) {
            throw UsageError("CNOT: control equals target (q" +
                             std::to_string(target) + ")");
        }
    } else if (control != -1) {
        throw UsageError(std::string(qforecast::to_string(kind)) +
                         " does not take a control qubit");
    }
    if (!std::isfinite(angle)) {
        throw UsageError("non-finite rotation angle");
    }
}

std::string to_string(const Gate &g) {
    std::string out = qforecast::to_string(g.kind);
    if (g.kind == GateKind::CNOT) {
        out += " q" + std::to_string(g.control) + " q" +
               std::to_string(g.target);
        return out;
    }
    out += " q" + std::to_string(g.target);
    if (is_rotation(g.kind)) {
        char buf[40];
        std::snprintf(buf, sizeof buf, " %.17g", g.angle);
        out += buf;
    }
    return out;
}

namespace {

void check_qubit_count(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("n_qubits must be in [1, " +
                          std::to_string(kMaxQubits) + "], got " +
                          std::to_string(n_qubits));
    }
}

} // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    check_qubit_count(n_qubits);
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(int n_qubits, std::vector<Complex> amps)
    : n_qubits_(n_qubits), amps_(std::move(amps)) {}

StateVector StateVector::from_amplitudes(std::vector<Complex> amps) {
    if (amps.size() < 2 || !std::has_single_bit(amps.size())) {
        throw UsageError("amplitude count must be a power of two >= 2, got " +
                         std::to_string(amps.size()));
    }
    const int n = std::countr_zero(amps.size());
    check_qubit_count(n);
    return StateVector(n, std::move(amps));
}

double StateVector::norm_squared() const {
    return kernels::parallel::norm_squared(amps_);
}

StateVector zero_state(int n_qubits) { return StateVector(n_qubits); }

void apply_gate(StateVector &state, const Gate &gate) {
    gate.validate(state.n_qubits());
    if (gate.kind == GateKind::CNOT) {
        kernels::parallel::apply_cnot(state.amplitudes(), gate.control,
                                      gate.target);
    } else {
        kernels::parallel::apply_1q(state.amplitudes(), gate.target,
                                    gate.matrix());
    }
}

void apply_circuit(StateVector &state, std::span<const Gate> gates) {
    for (const auto &g : gates) {
        g.validate(state.n_qubits());
    }
    for (const auto &g : gates) {
        apply_gate(state, g);
    }
}

double expval_z(const StateVector &state, int qubit) {
    if (qubit < 0 || qubit >= state.n_qubits()) {
        throw UsageError("expval_z: qubit " + std::to_string(qubit) +
                         " out of range for " +
                         std::to_string(state.n_qubits()) + " qubits");
    }
    return kernels::parallel::expval_z(state.amplitudes(), qubit);
}

std::vector<double> expval_z_all(const StateVector &state) {
    return kernels::parallel::expval_z_all(state.amplitudes(),
                                           state.n_qubits());
}

} // namespace qforecast
