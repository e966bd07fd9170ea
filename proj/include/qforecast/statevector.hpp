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
 * Dense statevector simulator.
 *
 * Bit ordering: qubit 0 is the least-significant bit of the basis-state
 * index, so |q_{n-1} ... q_1 q_0> lives at index sum_i q_i 2^i. Everything
 * in the library (circuits, expectations, gradients) follows this.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qforecast {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 24;

/// Row-major 2x2 complex matrix.
struct Mat2 {
    Complex m00, m01, m10, m11;

    [[nodiscard]] Mat2 adjoint() const {
        return {std::conj(m00), std::conj(m10), std::conj(m01),
                std::conj(m11)};
    }
    friend Mat2 operator*(const Mat2 &a, const Mat2 &b) {
        return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
                a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
    }
};

namespace gates {
Mat2 hadamard();
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
/// exp(-i angle X / 2)
Mat2 rx(double angle);
/// exp(-i angle Y / 2) = [[cos, -sin], [sin, cos]] of the half angle
Mat2 ry(double angle);
/// exp(-i angle Z / 2)
Mat2 rz(double angle);
} // namespace gates

enum class GateKind : std::uint8_t { H, RX, RY, RZ, CNOT };

const char *to_string(GateKind kind);

[[nodiscard]] constexpr bool is_rotation(GateKind k) {
    return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
}

/**
 * One gate of a circuit. Use the factory functions; they keep the
 * invariants (angles only on rotations, a control only on CNOT).
 */
struct Gate {
    GateKind kind = GateKind::H;
    int target = 0;
    int control = -1; ///< CNOT only, -1 otherwise
    double angle = 0.0; ///< rotations only, radians

    static Gate h(int target) { return {GateKind::H, target, -1, 0.0}; }
    static Gate rx(int target, double angle) {
        return {GateKind::RX, target, -1, angle};
    }
    static Gate ry(int target, double angle) {
        return {GateKind::RY, target, -1, angle};
    }
    static Gate rz(int target, double angle) {
        return {GateKind::RZ, target, -1, angle};
    }
    static Gate cnot(int control, int target) {
        return {GateKind::CNOT, target, control, 0.0};
    }

    /// G^dagger: H and CNOT are self-inverse, rotations negate the angle.
    [[nodiscard]] Gate adjoint() const;

    /// 2x2 unitary for single-qubit kinds; throws UsageError for CNOT.
    [[nodiscard]] Mat2 matrix() const;

    /// Throws UsageError if the gate does not fit an n-qubit register.
    void validate(int n_qubits) const;

    friend bool operator==(const Gate &, const Gate &) = default;
};

/// Stable one-line rendering, e.g. "RY q2 0.5" or "CNOT q0 q1".
std::string to_string(const Gate &g);

/// Complex amplitudes of an n-qubit register, 1 <= n <= kMaxQubits.
class StateVector {
  public:
    /// |0...0>
    explicit StateVector(int n_qubits);

    /// Takes ownership of `amps`; size must be a power of two.
    static StateVector from_amplitudes(std::vector<Complex> amps);

    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }

    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amps_; }

    [[nodiscard]] const Complex &operator[](std::size_t i) const {
        return amps_[i];
    }
    Complex &operator[](std::size_t i) { return amps_[i]; }

    [[nodiscard]] double norm_squared() const;

  private:
    StateVector(int n_qubits, std::vector<Complex> amps);

    int n_qubits_;
    std::vector<Complex> amps_;
};

/// |0...0> on n qubits; ConfigError outside [1, kMaxQubits].
StateVector zero_state(int n_qubits);

/// Applies `gate` in place.
void apply_gate(StateVector &state, const Gate &gate);

/// Applies `gates` in list order, in place.
void apply_circuit(StateVector &state, std::span<const Gate> gates);

/// <Z_qubit>; +1 weight where the qubit's bit is 0.
double expval_z(const StateVector &state, int qubit);

/// <Z_i> for every qubit, index i.
std::vector<double> expval_z_all(const StateVector &state);

} // namespace qforecast
