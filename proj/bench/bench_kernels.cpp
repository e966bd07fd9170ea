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

// Serial reference kernels against the OpenMP kernels, plus the per-sample
// cost of the layered engine and of the generic gate-list adjoint.

#include "qforecast/kernels.hpp"
#include "qforecast/layered_qnn.hpp"
#include "qforecast/qnn.hpp"
#include "qforecast/rng.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

namespace {

using namespace qforecast;

std::vector<Complex> random_state(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Complex> amps(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &a : amps) {
        a = {rng.normal(), rng.normal()};
        norm += std::norm(a);
    }
    for (auto &a : amps) {
        a /= std::sqrt(norm);
    }
    return amps;
}

template <void (*Apply)(std::span<Complex>, int, const Mat2 &)>
void BM_Apply1q(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    auto amps = random_state(n, 1);
    const Mat2 u = gates::ry(0.3) * gates::rx(0.7);
    int q = 0;
    for (auto _ : state) {
        Apply(amps, q, u);
        q = (q + 1) % n;
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

template <void (*Apply)(std::span<Complex>, int, int)>
void BM_Cnot(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    auto amps = random_state(n, 2);
    int q = 0;
    for (auto _ : state) {
        Apply(amps, q, (q + 1) % n);
        q = (q + 1) % n;
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

template <double (*Expval)(std::span<const Complex>, int)>
void BM_ExpvalZ(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const auto amps = random_state(n, 3);
    int q = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(Expval(amps, q));
        q = (q + 1) % n;
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

void BM_ExpvalZAllSerial(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const auto amps = random_state(n, 4);
    for (auto _ : state) {
        for (int q = 0; q < n; ++q) {
            benchmark::DoNotOptimize(kernels::serial::expval_z(amps, q));
        }
    }
}

void BM_ExpvalZAllParallel(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const auto amps = random_state(n, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::parallel::expval_z_all(amps, n));
    }
}

struct Sample {
    AnsatzConfig cfg;
    ParameterVector params;
    std::vector<double> x;
};

Sample make_sample(int n, int layers) {
    Sample s;
    s.cfg = AnsatzConfig{n, layers, EntanglementTopology::PairsThenTie, 1.0};
    Rng rng(5);
    s.params = ParameterVector::zeros(s.cfg);
    for (auto &a : s.params.quantum) {
        a = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    for (auto &w : s.params.readout_weights) {
        w = rng.uniform(-0.1, 0.1);
    }
    for (int i = 0; i < n; ++i) {
        s.x.push_back(rng.normal());
    }
    return s;
}

void BM_EngineSample(benchmark::State &state) {
    const auto s = make_sample(static_cast<int>(state.range(0)),
                               static_cast<int>(state.range(1)));
    LayeredQnn engine(s.cfg);
    auto grad = ParameterVector::zeros(s.cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.forward(s.x, s.params));
        engine.backward(s.params, 1.0, grad);
    }
}

void BM_GateListAdjointSample(benchmark::State &state) {
    const auto s = make_sample(static_cast<int>(state.range(0)),
                               static_cast<int>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(adjoint_gradient(s.x, s.cfg, s.params, 0.0));
    }
}

void BM_RotateAll(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    auto amps = random_state(n, 6);
    const std::vector<Mat2> u(static_cast<std::size_t>(n), gates::ry(0.3) * gates::rx(0.7));
    for (auto _ : state) {
        engine_kernels::rotate_all(amps, n, u);
        benchmark::ClobberMemory();
    }
}

void BM_Gather(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const auto in = random_state(n, 7);
    std::vector<Complex> out(in.size());
    const auto map = BitLinearMap::from_cnots(
        build_entanglement(EntanglementTopology::PairsThenTie, n), n);
    for (auto _ : state) {
        engine_kernels::gather(in, out, map);
        benchmark::ClobberMemory();
    }
}

void BM_CrossAll(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const auto lam = random_state(n, 8);
    const auto psi = random_state(n, 9);
    std::vector<double> out(3 * static_cast<std::size_t>(n));
    for (auto _ : state) {
        engine_kernels::cross_all(lam, psi, n, out);
        benchmark::DoNotOptimize(out.data());
    }
}

} // namespace

BENCHMARK(BM_RotateAll)->Name("engine/rotate_all")->Arg(19)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gather)->Name("engine/gather")->Arg(19)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossAll)->Name("engine/cross_all")->Arg(19)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Apply1q<kernels::serial::apply_1q>)->Name("apply_1q/serial")->DenseRange(14, 20, 3);
BENCHMARK(BM_Apply1q<kernels::parallel::apply_1q>)->Name("apply_1q/parallel")->DenseRange(14, 20, 3);
BENCHMARK(BM_Cnot<kernels::serial::apply_cnot>)->Name("cnot/serial")->DenseRange(14, 20, 3);
BENCHMARK(BM_Cnot<kernels::parallel::apply_cnot>)->Name("cnot/parallel")->DenseRange(14, 20, 3);
BENCHMARK(BM_ExpvalZ<kernels::serial::expval_z>)->Name("expval_z/serial")->DenseRange(14, 20, 3);
BENCHMARK(BM_ExpvalZ<kernels::parallel::expval_z>)->Name("expval_z/parallel")->DenseRange(14, 20, 3);
BENCHMARK(BM_ExpvalZAllSerial)->Name("expval_z_all/serial")->Arg(19);
BENCHMARK(BM_ExpvalZAllParallel)->Name("expval_z_all/parallel")->Arg(19);
BENCHMARK(BM_EngineSample)->Name("sample/engine")->Args({4, 1})->Args({19, 1})->Args({19, 5})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GateListAdjointSample)->Name("sample/gate_list_adjoint")->Args({4, 1})->Args({19, 5})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
