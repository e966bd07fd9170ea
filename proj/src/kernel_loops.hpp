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

// Inner loops shared by the OpenMP kernels and the layered QNN engine.
// Everything here is single-threaded and works on a contiguous range of
// interleaved (re, im) doubles; callers decide how ranges map to threads.
#pragma once

#include "qforecast/statevector.hpp"

#include <cstddef>
#include <type_traits>

namespace qforecast::loops {

inline std::size_t insert_zero(std::size_t p, int q) {
    const std::size_t low = (std::size_t{1} << q) - 1;
    return ((p & ~low) << 1) | (p & low);
}

/// u applied to `count` amplitude pairs (lo[j], hi[j]).
inline void apply_pairs(double *__restrict lo, double *__restrict hi,
                        std::size_t count, const Mat2 &u) {
    const double u00r = u.m00.real(), u00i = u.m00.imag();
    const double u01r = u.m01.real(), u01i = u.m01.imag();
    const double u10r = u.m10.real(), u10i = u.m10.imag();
    const double u11r = u.m11.real(), u11i = u.m11.imag();
    for (std::size_t j = 0; j < count; ++j) {
        const double a0r = lo[2 * j], a0i = lo[2 * j + 1];
        const double a1r = hi[2 * j], a1i = hi[2 * j + 1];
        lo[2 * j] = u00r * a0r - u00i * a0i + u01r * a1r - u01i * a1i;
        lo[2 * j + 1] = u00r * a0i + u00i * a0r + u01r * a1i + u01i * a1r;
        hi[2 * j] = u10r * a0r - u10i * a0i + u11r * a1r - u11i * a1i;
        hi[2 * j + 1] = u10r * a0i + u10i * a0r + u11r * a1i + u11i * a1r;
    }
}

template <class Stride>
inline void apply_1q_impl(double *d, std::size_t n_amps, Stride stride,
                          const Mat2 &u) {
    for (std::size_t base = 0; base < n_amps; base += 2 * stride) {
        apply_pairs(d + 2 * base, d + 2 * (base + stride), stride, u);
    }
}

/// u applied to qubit q over amplitudes [0, n_amps) of d. Small strides get
/// compile-time loop bounds so the pair loop unrolls.
inline void apply_1q(double *d, std::size_t n_amps, int q, const Mat2 &u) {
    switch (q) {
    case 0: return apply_1q_impl(d, n_amps, std::integral_constant<std::size_t, 1>{}, u);
    case 1: return apply_1q_impl(d, n_amps, std::integral_constant<std::size_t, 2>{}, u);
    case 2: return apply_1q_impl(d, n_amps, std::integral_constant<std::size_t, 4>{}, u);
    case 3: return apply_1q_impl(d, n_amps, std::integral_constant<std::size_t, 8>{}, u);
    default: return apply_1q_impl(d, n_amps, std::size_t{1} << q, u);
    }
}

/// Pauli overlaps of one pair set, three doubles added to acc:
///   acc[0] += Im sum conj(l0) p0 - conj(l1) p1
///   acc[1], acc[2] += Re, Im of sum conj(l1) p0 - l0 conj(p1)
/// For a traceless Hermitian M = [[m, conj(k)], [k, -m]] this gives
/// Im <lam|M|psi> = m * acc[0] + Im(k * (acc[1] + i acc[2])).
inline void cross_pairs(const double *__restrict l0,
                        const double *__restrict l1,
                        const double *__restrict p0,
                        const double *__restrict p1, std::size_t count,
                        double *acc) {
    double zi = 0, dr = 0, di = 0;
#pragma omp simd reduction(+ : zi, dr, di)
    for (std::size_t j = 0; j < count; ++j) {
        const double l0r = l0[2 * j], l0i = l0[2 * j + 1];
        const double l1r = l1[2 * j], l1i = l1[2 * j + 1];
        const double p0r = p0[2 * j], p0i = p0[2 * j + 1];
        const double p1r = p1[2 * j], p1i = p1[2 * j + 1];
        zi += l0r * p0i - l0i * p0r - l1r * p1i + l1i * p1r;
        dr += l1r * p0r + l1i * p0i - l0r * p1r - l0i * p1i;
        di += l1r * p0i - l1i * p0r - l0i * p1r + l0r * p1i;
    }
    acc[0] += zi;
    acc[1] += dr;
    acc[2] += di;
}

template <class Stride>
inline void cross_1q_impl(const double *lam, const double *psi,
                          std::size_t n_amps, Stride stride, double *acc) {
    for (std::size_t base = 0; base < n_amps; base += 2 * stride) {
        cross_pairs(lam + 2 * base, lam + 2 * (base + stride), psi + 2 * base,
                    psi + 2 * (base + stride), stride, acc);
    }
}

/// cross_pairs over every pair of qubit q inside [0, n_amps).
inline void cross_1q(const double *lam, const double *psi, std::size_t n_amps,
                     int q, double *acc) {
    switch (q) {
    case 0: return cross_1q_impl(lam, psi, n_amps, std::integral_constant<std::size_t, 1>{}, acc);
    case 1: return cross_1q_impl(lam, psi, n_amps, std::integral_constant<std::size_t, 2>{}, acc);
    case 2: return cross_1q_impl(lam, psi, n_amps, std::integral_constant<std::size_t, 4>{}, acc);
    case 3: return cross_1q_impl(lam, psi, n_amps, std::integral_constant<std::size_t, 8>{}, acc);
    default: return cross_1q_impl(lam, psi, n_amps, std::size_t{1} << q, acc);
    }
}

} // namespace qforecast::loops
