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

#include "qforecast/layered_qnn.hpp"

#include "kernel_loops.hpp"
#include "qforecast/errors.hpp"
#include "qforecast/kernels.hpp"
#include "qforecast/qnn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace qforecast {

namespace {

using Index = std::ptrdiff_t;

/// Qubits below this index are processed inside cache-resident blocks.
constexpr int kLocalBits = 15;

bool threaded(std::size_t n) { return n >= kernels::parallel::kThreadThreshold; }

constexpr std::size_t kOverlapWidth = 3;

/// Im <lam|M|psi> for traceless Hermitian M from the three overlaps.
double pauli_overlap(const Mat2 &m, const double *c) {
    return m.m00.real() * c[0] + (m.m10 * Complex{c[1], c[2]}).imag();
}

} // namespace

BitLinearMap::BitLinearMap(std::span<const std::uint32_t> images) {
    const int n = static_cast<int>(images.size());
    lo_bits_ = n / 2;
    lo_mask_ = (std::uint32_t{1} << lo_bits_) - 1;
    const int hi_bits = n - lo_bits_;
    lo_.assign(std::size_t{1} << lo_bits_, 0);
    hi_.assign(std::size_t{1} << hi_bits, 0);
    for (std::size_t m = 1; m < lo_.size(); ++m) {
        const int b = std::countr_zero(m);
        lo_[m] = lo_[m & (m - 1)] ^ images[static_cast<std::size_t>(b)];
    }
    for (std::size_t m = 1; m < hi_.size(); ++m) {
        const int b = std::countr_zero(m);
        hi_[m] = hi_[m & (m - 1)] ^
                 images[static_cast<std::size_t>(lo_bits_ + b)];
    }
}

BitLinearMap BitLinearMap::from_cnots(std::span<const Gate> cnots,
                                      int n_qubits) {
    std::vector<std::uint32_t> images(static_cast<std::size_t>(n_qubits));
    for (int b = 0; b < n_qubits; ++b) {
        std::uint32_t x = std::uint32_t{1} << b;
        for (const auto &g : cnots) {
            if (g.kind != GateKind::CNOT) {
                throw UsageError("BitLinearMap: only CNOT gates are linear");
            }
            if ((x >> g.control) & 1U) {
                x ^= std::uint32_t{1} << g.target;
            }
        }
        images[static_cast<std::size_t>(b)] = x;
    }
    return BitLinearMap(images);
}

namespace engine_kernels {

void rotate_all(std::span<Complex> amps, int n_qubits,
                std::span<const Mat2> u) {
    const int local = std::min(n_qubits, kLocalBits);
    const std::size_t block = std::size_t{1} << local;
    const Index n_blocks = static_cast<Index>(amps.size() / block);
    double *d = reinterpret_cast<double *>(amps.data());

#pragma omp parallel for schedule(static) if (threaded(amps.size()))
    for (Index b = 0; b < n_blocks; ++b) {
        double *blk = d + 2 * static_cast<std::size_t>(b) * block;
        for (int q = 0; q < local; ++q) {
            loops::apply_1q(blk, block, q, u[static_cast<std::size_t>(q)]);
        }
    }
    for (int q = local; q < n_qubits; ++q) {
        kernels::parallel::apply_1q(amps, q, u[static_cast<std::size_t>(q)]);
    }
}

void gather(std::span<const Complex> in, std::span<Complex> out,
            const BitLinearMap &map) {
    const Index n = static_cast<Index>(in.size());
#pragma omp parallel for schedule(static) if (threaded(in.size()))
    for (Index k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = in[map(static_cast<std::uint32_t>(k))];
    }
}

void cross_all(std::span<const Complex> lam, std::span<const Complex> psi,
               int n_qubits, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const double *l = reinterpret_cast<const double *>(lam.data());
    const double *p = reinterpret_cast<const double *>(psi.data());

    const int local = std::min(n_qubits, kLocalBits);
    const std::size_t block = std::size_t{1} << local;
    const Index n_blocks = static_cast<Index>(lam.size() / block);
    const std::size_t width = kOverlapWidth * static_cast<std::size_t>(local);
    std::vector<double> partial(static_cast<std::size_t>(n_blocks) * width, 0.0);

#pragma omp parallel for schedule(static) if (threaded(lam.size()))
    for (Index b = 0; b < n_blocks; ++b) {
        const std::size_t off = 2 * static_cast<std::size_t>(b) * block;
        double *row = partial.data() + static_cast<std::size_t>(b) * width;
        for (int q = 0; q < local; ++q) {
            loops::cross_1q(l + off, p + off, block, q, row + kOverlapWidth * static_cast<std::size_t>(q));
        }
    }
    for (Index b = 0; b < n_blocks; ++b) {
        const double *row = partial.data() + static_cast<std::size_t>(b) * width;
        for (std::size_t k = 0; k < width; ++k) {
            out[k] += row[k];
        }
    }

    // High qubits: fixed-size chunks of pairs; each chunk maps to one
    // contiguous run because the chunk never exceeds the stride.
    const std::size_t chunk = std::min(kernels::parallel::kReduceBlock,
                                       lam.size() / 2);
    const Index n_chunks = static_cast<Index>(lam.size() / 2 / chunk);
    std::vector<double> chunk_acc(static_cast<std::size_t>(n_chunks) * kOverlapWidth);
    for (int q = local; q < n_qubits; ++q) {
        const std::size_t stride = std::size_t{1} << q;
        std::fill(chunk_acc.begin(), chunk_acc.end(), 0.0);
#pragma omp parallel for schedule(static) if (threaded(lam.size()))
        for (Index c = 0; c < n_chunks; ++c) {
            const std::size_t i0 =
                loops::insert_zero(static_cast<std::size_t>(c) * chunk, q);
            const std::size_t i1 = i0 + stride;
            loops::cross_pairs(l + 2 * i0, l + 2 * i1, p + 2 * i0, p + 2 * i1,
                               chunk,
                               chunk_acc.data() + kOverlapWidth * static_cast<std::size_t>(c));
        }
        double *dst = out.data() + kOverlapWidth * static_cast<std::size_t>(q);
        for (Index c = 0; c < n_chunks; ++c) {
            for (std::size_t k = 0; k < kOverlapWidth; ++k) {
                dst[k] += chunk_acc[kOverlapWidth * static_cast<std::size_t>(c) + k];
            }
        }
    }
}

} // namespace engine_kernels

LayeredQnn::LayeredQnn(const AnsatzConfig &config) : config_(config) {
    config_.validate();
    const int n = config_.n_qubits;
    dim_ = std::size_t{1} << n;
    auto ent = build_entanglement(config_.topology, n);
    ent_ = BitLinearMap::from_cnots(ent, n);
    std::reverse(ent.begin(), ent.end());
    ent_inv_ = BitLinearMap::from_cnots(ent, n);
    layer_states_.assign(static_cast<std::size_t>(config_.n_layers),
                         std::vector<Complex>(dim_));
    lambda_.resize(dim_);
    scratch_.resize(dim_);
    fused_.resize(static_cast<std::size_t>(config_.n_layers * n));
    cross_.resize(kOverlapWidth * static_cast<std::size_t>(n));
}

double LayeredQnn::forward(std::span<const double> x,
                           const ParameterVector &params) {
    const int n = config_.n_qubits;
    if (x.size() != static_cast<std::size_t>(n)) {
        throw UsageError("expected " + std::to_string(n) + " features, got " +
                         std::to_string(x.size()));
    }
    params.validate(config_);

    // Feature map: RY(x_q) H |0> = ((c - s), (c + s)) / sqrt2 per qubit.
    scratch_[0] = 1.0;
    std::size_t filled = 1;
    for (int q = 0; q < n; ++q) {
        const double half = config_.input_scale * x[static_cast<std::size_t>(q)] / 2.0;
        const double c = std::cos(half), s = std::sin(half);
        const double a0 = (c - s) * (std::numbers::sqrt2 / 2.0);
        const double a1 = (c + s) * (std::numbers::sqrt2 / 2.0);
        for (std::size_t j = 0; j < filled; ++j) {
            scratch_[j + filled] = scratch_[j] * a1;
            scratch_[j] *= a0;
        }
        filled *= 2;
    }

    for (int layer = 0; layer < config_.n_layers; ++layer) {
        Mat2 *row = fused_.data() + static_cast<std::size_t>(layer * n);
        for (int q = 0; q < n; ++q) {
            const auto at = [&](Axis a) {
                return params.quantum[angle_index(layer, q, a, n)];
            };
            row[q] = gates::rz(at(Axis::Z)) * gates::ry(at(Axis::Y)) *
                     gates::rx(at(Axis::X));
        }
        const auto &src =
            layer == 0 ? scratch_ : layer_states_[static_cast<std::size_t>(layer - 1)];
        auto &dst = layer_states_[static_cast<std::size_t>(layer)];
        engine_kernels::gather(src, dst, ent_inv_);
        engine_kernels::rotate_all(dst, n,
                                   std::span<const Mat2>(row, static_cast<std::size_t>(n)));
    }

    z_ = kernels::parallel::expval_z_all(layer_states_.back(), n);
    return readout(z_, params);
}

void LayeredQnn::backward(const ParameterVector &params, double scale,
                          ParameterVector &grad) {
    const int n = config_.n_qubits;
    params.validate(config_);
    grad.validate(config_);
    for (int q = 0; q < n; ++q) {
        grad.readout_weights[static_cast<std::size_t>(q)] +=
            scale * z_[static_cast<std::size_t>(q)];
    }
    grad.readout_bias += scale;

    // lambda = (sum_q w_q Z_q) |psi_final>; the weight of index j is
    // W - 2 * (sum of w_q over set bits), tabulated per index half.
    const int lo_bits = n / 2;
    const std::size_t lo_mask = (std::size_t{1} << lo_bits) - 1;
    std::vector<double> w_lo(std::size_t{1} << lo_bits, 0.0);
    std::vector<double> w_hi(std::size_t{1} << (n - lo_bits), 0.0);
    for (std::size_t m = 1; m < w_lo.size(); ++m) {
        w_lo[m] = w_lo[m & (m - 1)] +
                  params.readout_weights[static_cast<std::size_t>(std::countr_zero(m))];
    }
    for (std::size_t m = 1; m < w_hi.size(); ++m) {
        w_hi[m] = w_hi[m & (m - 1)] +
                  params.readout_weights[static_cast<std::size_t>(
                      lo_bits + std::countr_zero(m))];
    }
    double w_total = 0.0;
    for (double w : params.readout_weights) {
        w_total += w;
    }
    {
        const auto &psi = layer_states_.back();
        const Index dim = static_cast<Index>(dim_);
#pragma omp parallel for schedule(static) if (threaded(dim_))
        for (Index j = 0; j < dim; ++j) {
            const std::size_t u = static_cast<std::size_t>(j);
            const double o = w_total - 2.0 * (w_lo[u & lo_mask] + w_hi[u >> lo_bits]);
            lambda_[u] = o * psi[u];
        }
    }

    const Mat2 x = gates::pauli_x(), y = gates::pauli_y(), z = gates::pauli_z();
    std::vector<Mat2> inverse(static_cast<std::size_t>(n));
    for (int layer = config_.n_layers - 1; layer >= 0; --layer) {
        engine_kernels::cross_all(lambda_, layer_states_[static_cast<std::size_t>(layer)],
                                  n, cross_);
        for (int q = 0; q < n; ++q) {
            const auto at = [&](Axis a) {
                return params.quantum[angle_index(layer, q, a, n)];
            };
            // U = RZ RY RX. Moving each generator to the end of U:
            //   d/d omega -> Z, d/d phi -> RZ Y RZ^+, d/d theta -> V X V^+
            // with V = RZ RY.
            const Mat2 rz = gates::rz(at(Axis::Z));
            const Mat2 v = rz * gates::ry(at(Axis::Y));
            const Mat2 m_y = rz * y * rz.adjoint();
            const Mat2 m_x = v * x * v.adjoint();
            const double *c = cross_.data() + kOverlapWidth * static_cast<std::size_t>(q);
            grad.quantum[angle_index(layer, q, Axis::X, n)] += scale * pauli_overlap(m_x, c);
            grad.quantum[angle_index(layer, q, Axis::Y, n)] += scale * pauli_overlap(m_y, c);
            grad.quantum[angle_index(layer, q, Axis::Z, n)] += scale * pauli_overlap(z, c);
        }
        if (layer == 0) {
            break;
        }
        for (int q = 0; q < n; ++q) {
            inverse[static_cast<std::size_t>(q)] =
                fused_[static_cast<std::size_t>(layer * n + q)].adjoint();
        }
        engine_kernels::rotate_all(lambda_, n, inverse);
        engine_kernels::gather(lambda_, scratch_, ent_);
        lambda_.swap(scratch_);
    }
}

} // namespace qforecast
