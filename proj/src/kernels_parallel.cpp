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

#include <algorithm>
#include <bit>
#include <cstddef>

namespace qforecast::kernels::parallel {

namespace {

using Index = std::ptrdiff_t;

/// Spreads p so that bit position `q` is zero.
inline std::size_t insert_zero(std::size_t p, int q) {
    const std::size_t low = (std::size_t{1} << q) - 1;
    return ((p & ~low) << 1) | (p & low);
}

inline bool threaded(std::size_t n) { return n >= kThreadThreshold; }

} // namespace

void apply_1q(std::span<Complex> amps, int target, const Mat2 &u) {
    double *d = reinterpret_cast<double *>(amps.data());
    const std::size_t stride = std::size_t{1} << target;
    const Index pairs = static_cast<Index>(amps.size() / 2);
    const double u00r = u.m00.real(), u00i = u.m00.imag();
    const double u01r = u.m01.real(), u01i = u.m01.imag();
    const double u10r = u.m10.real(), u10i = u.m10.imag();
    const double u11r = u.m11.real(), u11i = u.m11.imag();

#pragma omp parallel for schedule(static) if (threaded(amps.size()))
    for (Index p = 0; p < pairs; ++p) {
        const std::size_t i0 = insert_zero(static_cast<std::size_t>(p), target);
        const std::size_t i1 = i0 + stride;
        const double a0r = d[2 * i0], a0i = d[2 * i0 + 1];
        const double a1r = d[2 * i1], a1i = d[2 * i1 + 1];
        d[2 * i0] = u00r * a0r - u00i * a0i + u01r * a1r - u01i * a1i;
        d[2 * i0 + 1] = u00r * a0i + u00i * a0r + u01r * a1i + u01i * a1r;
        d[2 * i1] = u10r * a0r - u10i * a0i + u11r * a1r - u11i * a1i;
        d[2 * i1 + 1] = u10r * a0i + u10i * a0r + u11r * a1i + u11i * a1r;
    }
}

void apply_cnot(std::span<Complex> amps, int control, int target) {
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    const int lo = std::min(control, target);
    const int hi = std::max(control, target);
    const Index quads = static_cast<Index>(amps.size() / 4);

#pragma omp parallel for schedule(static) if (threaded(amps.size()))
    for (Index p = 0; p < quads; ++p) {
        const std::size_t base =
            insert_zero(insert_zero(static_cast<std::size_t>(p), lo), hi);
        const std::size_t i = base | cbit;
        std::swap(amps[i], amps[i | tbit]);
    }
}

double expval_z(std::span<const Complex> amps, int qubit) {
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t block = std::min(kReduceBlock, amps.size());
    const Index n_blocks = static_cast<Index>(amps.size() / block);
    std::vector<double> partial(static_cast<std::size_t>(n_blocks));

#pragma omp parallel for schedule(static) if (threaded(amps.size()))
    for (Index b = 0; b < n_blocks; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * block;
        double acc = 0.0;
        for (std::size_t i = begin; i < begin + block; ++i) {
            const double p = std::norm(amps[i]);
            acc += (i & bit) ? -p : p;
        }
        partial[static_cast<std::size_t>(b)] = acc;
    }
    double total = 0.0;
    for (double v : partial) {
        total += v;
    }
    return total;
}

double norm_squared(std::span<const Complex> amps) {
    const std::size_t block = std::min(kReduceBlock, amps.size());
    const Index n_blocks = static_cast<Index>(amps.size() / block);
    std::vector<double> partial(static_cast<std::size_t>(n_blocks));
    const double *d = reinterpret_cast<const double *>(amps.data());

#pragma omp parallel for schedule(static) if (threaded(amps.size()))
    for (Index b = 0; b < n_blocks; ++b) {
        const std::size_t begin = 2 * static_cast<std::size_t>(b) * block;
        double acc = 0.0;
        for (std::size_t i = begin; i < begin + 2 * block; ++i) {
            acc += d[i] * d[i];
        }
        partial[static_cast<std::size_t>(b)] = acc;
    }
    double total = 0.0;
    for (double v : partial) {
        total += v;
    }
    return total;
}

std::vector<double> expval_z_all(std::span<const Complex> amps, int n_qubits) {
    // Within a block the bits at or above log2(block) are constant, so those
    // qubits only need the block's total probability.
    const std::size_t block = std::min(kReduceBlock, amps.size());
    const int low_bits = std::countr_zero(block);
    const Index n_blocks = static_cast<Index>(amps.size() / block);
    const std::size_t width = static_cast<std::size_t>(n_qubits) + 1;
    std::vector<double> partial(static_cast<std::size_t>(n_blocks) * width, 0.0);

#pragma omp parallel for schedule(static) if (threaded(amps.size()))
    for (Index b = 0; b < n_blocks; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * block;
        double *row = partial.data() + static_cast<std::size_t>(b) * width;
        // Fold the block in halves: the upper half of the current range is
        // exactly the set of indices with the current top bit set.
        std::vector<double> prob(block);
        for (std::size_t j = 0; j < block; ++j) {
            prob[j] = std::norm(amps[begin + j]);
        }
        double ones[64] = {};
        for (int q = low_bits - 1; q >= 0; --q) {
            const std::size_t half = std::size_t{1} << q;
            double upper = 0.0;
            for (std::size_t j = 0; j < half; ++j) {
                upper += prob[half + j];
                prob[j] += prob[half + j];
            }
            ones[q] = upper;
        }
        const double total = prob[0];
        for (int q = 0; q < n_qubits; ++q) {
            row[q] = q < low_bits ? ones[q]
                                  : (((begin >> q) & 1U) ? total : 0.0);
        }
        row[n_qubits] = total;
    }

    std::vector<double> ones(static_cast<std::size_t>(n_qubits), 0.0);
    double total = 0.0;
    for (Index b = 0; b < n_blocks; ++b) {
        const double *row = partial.data() + static_cast<std::size_t>(b) * width;
        for (int q = 0; q < n_qubits; ++q) {
            ones[static_cast<std::size_t>(q)] += row[q];
        }
        total += row[n_qubits];
    }
    std::vector<double> z(static_cast<std::size_t>(n_qubits));
    for (int q = 0; q < n_qubits; ++q) {
        z[static_cast<std::size_t>(q)] = total - 2.0 * ones[static_cast<std::size_t>(q)];
    }
    return z;
}

} // namespace qforecast::kernels::parallel
