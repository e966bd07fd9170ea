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
 * Gate-application and measurement kernels over raw amplitude spans.
 *
 * Two implementations share one signature set:
 *  - `serial` is the straightforward reference. Tests compare against it
 *    and the benchmark uses it as the baseline.
 *  - `parallel` is OpenMP-threaded, with loops written out in real
 *    arithmetic so the compiler can vectorise them.
 *
 * Reductions in `parallel` sum fixed-size blocks and then combine the
 * block sums in index order, so results do not depend on the thread count.
 */
#pragma once

#include "qforecast/statevector.hpp"

#include <span>
#include <vector>

namespace qforecast::kernels {

namespace serial {
void apply_1q(std::span<Complex> amps, int target, const Mat2 &u);
void apply_cnot(std::span<Complex> amps, int control, int target);
double expval_z(std::span<const Complex> amps, int qubit);
double norm_squared(std::span<const Complex> amps);
} // namespace serial

namespace parallel {
/// Below this many amplitudes the kernels stay single-threaded.
inline constexpr std::size_t kThreadThreshold = std::size_t{1} << 14;
/// Reduction block size (amplitudes).
inline constexpr std::size_t kReduceBlock = std::size_t{1} << 12;

void apply_1q(std::span<Complex> amps, int target, const Mat2 &u);
void apply_cnot(std::span<Complex> amps, int control, int target);
double expval_z(std::span<const Complex> amps, int qubit);
double norm_squared(std::span<const Complex> amps);

/// <Z_i> for all i < n_qubits in one sweep.
std::vector<double> expval_z_all(std::span<const Complex> amps, int n_qubits);
} // namespace parallel

} // namespace qforecast::kernels
