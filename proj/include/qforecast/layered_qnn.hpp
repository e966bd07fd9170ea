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
 * Fast forward/backward engine for the layered QNN.
 *
 * Exploits the fixed circuit structure instead of walking a gate list:
 *  - the feature map produces a product state, built directly;
 *  - an entanglement layer is a CNOT network, i.e. a linear map on the bits
 *    of the basis index, applied as one gather;
 *  - the three rotations on a qubit are fused into one 2x2 unitary, and the
 *    n fused rotations of a layer are applied cache-blocked;
 *  - the state after each layer is kept, so the reverse sweep only has to
 *    propagate the adjoint state. Rotations in one layer act on distinct
 *    qubits and commute, so all 3n angle derivatives of a layer come from
 *    three per-qubit Pauli overlaps taken at the end of that layer.
 *
 * Results agree with output_gradient_adjoint() to rounding; all reductions
 * use fixed blocking so output is independent of the OpenMP thread count.
 */
#pragma once

#include "qforecast/circuit.hpp"
#include "qforecast/statevector.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qforecast {

/// Linear map over GF(2) on n-bit basis indices, evaluated via two lookup
/// tables (low half and high half of the index).
class BitLinearMap {
  public:
    BitLinearMap() = default;
    /// images[b] is the image of basis index 1 << b.
    explicit BitLinearMap(std::span<const std::uint32_t> images);

    /// The map x -> CNOT_k(...CNOT_1(x)) for a CNOT list.
    static BitLinearMap from_cnots(std::span<const Gate> cnots, int n_qubits);

    [[nodiscard]] std::uint32_t operator()(std::uint32_t x) const {
        return lo_[x & lo_mask_] ^ hi_[x >> lo_bits_];
    }

  private:
    int lo_bits_ = 0;
    std::uint32_t lo_mask_ = 0;
    std::vector<std::uint32_t> lo_, hi_;
};

class LayeredQnn {
  public:
    explicit LayeredQnn(const AnsatzConfig &config);

    [[nodiscard]] const AnsatzConfig &config() const noexcept {
        return config_;
    }

    /// Runs the circuit for one sample and returns the model output. The
    /// per-layer states are kept for a following backward().
    double forward(std::span<const double> x, const ParameterVector &params);

    /// <Z_i> after the last forward().
    [[nodiscard]] std::span<const double> expectations() const noexcept {
        return z_;
    }
    [[nodiscard]] std::span<const Complex> final_state() const noexcept {
        return layer_states_.back();
    }

    /// grad += scale * d(output)/d(params) at the last forward() sample.
    /// `params` must be the ones passed to that forward().
    void backward(const ParameterVector &params, double scale,
                  ParameterVector &grad);

  private:
    AnsatzConfig config_;
    std::size_t dim_;
    BitLinearMap ent_;     // basis index -> index after entanglement
    BitLinearMap ent_inv_; // its inverse
    std::vector<std::vector<Complex>> layer_states_;
    std::vector<Complex> lambda_, scratch_;
    std::vector<Mat2> fused_; // [layer][qubit]
    std::vector<double> z_;
    std::vector<double> cross_; // scratch for per-qubit overlaps
};

namespace engine_kernels {
/// u[q] applied to every qubit q (distinct qubits, so order is irrelevant).
void rotate_all(std::span<Complex> amps, int n_qubits, std::span<const Mat2> u);
/// out[k] = in[map(k)] for every basis index k.
void gather(std::span<const Complex> in, std::span<Complex> out,
            const BitLinearMap &map);
/// Per-qubit Pauli overlaps, 3 doubles per qubit: Im sum conj(lam_0) psi_0 -
/// conj(lam_1) psi_1, then Re and Im of sum conj(lam_1) psi_0 - lam_0 conj(psi_1).
void cross_all(std::span<const Complex> lam, std::span<const Complex> psi,
               int n_qubits, std::span<double> out);
} // namespace engine_kernels

} // namespace qforecast
