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

#include "qforecast/kernels.hpp"

#include <utility>

namespace qforecast::kernels::serial {

void apply_1q(std::span<Complex> amps, int target, const Mat2 &u) {
    const std::size_t stride = std::size_t{1} << target;
    for (std::size_t base = 0; base < amps.size(); base += 2 * stride) {
        for (std::size_t j = base; j < base + stride; ++j) {
            const Complex a0 = amps[j];
            const Complex a1 = amps[j + stride];
            amps[j] = u.m00 * a0 + u.m01 * a1;
            amps[j + stride] = u.m10 * a0 + u.m11 * a1;
        }
    }
}

void apply_cnot(std::span<Complex> amps, int control, int target) {
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cbit) != 0 && (i & tbit) == 0) {
            std::swap(amps[i], amps[i | tbit]);
        }
    }
}

double expval_z(std::span<const Complex> amps, int qubit) {
    const std::size_t bit = std::size_t{1} << qubit;
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        acc += (i & bit) ? -p : p;
    }
    return acc;
}

double norm_squared(std::span<const Complex> amps) {
    double acc = 0.0;
    for (const auto &a : amps) {
        acc += std::norm(a);
    }
    return acc;
}

} // namespace qforecast::kernels::serial
