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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "random_inputs.hpp"

#include "qforecast/errors.hpp"
#include "qforecast/layered_qnn.hpp"
#include "qforecast/qnn.hpp"

#include <omp.h>

#include <numbers>

using namespace qforecast;
using testing_support::random_features;
using testing_support::random_parameters;

namespace {

double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

AnsatzConfig random_config(Rng &rng, int max_qubits, int max_layers) {
    AnsatzConfig cfg;
    cfg.n_qubits = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_qubits - 1)));
    cfg.n_layers = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_layers)));
    cfg.topology = rng.below(2) == 0 ? EntanglementTopology::PairsThenTie
                                     : EntanglementTopology::CascadeRing;
    return cfg;
}

} // namespace

TEST_CASE("predict matches the dense oracle") {
    Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const auto cfg = random_config(rng, 4, 2);
        const auto p = random_parameters(rng, cfg);
        const auto x = random_features(rng, cfg.n_qubits);
        const auto circuit = assemble(x, cfg, p);
        const double ref = oracle::dense_output(circuit.gates, cfg.n_qubits,
                                                p.readout_weights, p.readout_bias);
        CHECK(std::abs(predict(x, cfg, p) - ref) < 1e-12);
    }
}

TEST_CASE("predict examples") {
    const AnsatzConfig cfg{4, 1, EntanglementTopology::PairsThenTie, 1.0};
    auto p = ParameterVector::zeros(cfg);
    p.readout_bias = 2.5;
    const std::vector<double> x(4, 0.0);
    CHECK(predict(x, cfg, p) == doctest::Approx(2.5).epsilon(1e-15));
    const std::vector<double> short_x(3, 0.0);
    CHECK_THROWS_AS(predict(short_x, cfg, p), UsageError);
    const AnsatzConfig one{1, 1, EntanglementTopology::PairsThenTie, 1.0};
    CHECK_THROWS_AS(predict(std::vector<double>{0.0}, one, p), ConfigError);
}

TEST_CASE("loss_mae") {
    CHECK(loss_mae(std::vector<double>{1, 2}, std::vector<double>{1, 2}) == 0.0);
    CHECK(loss_mae(std::vector<double>{1, 2}, std::vector<double>{3, 2}) == 1.0);
    CHECK(loss_mae(std::vector<double>{0.5, -0.5, 1}, std::vector<double>{0, 0, 0}) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(loss_mae(std::vector<double>{}, std::vector<double>{}), UsageError);
    CHECK_THROWS_AS(loss_mae(std::vector<double>{1}, std::vector<double>{1, 2}), UsageError);
    CHECK(mae_subgradient(0.0) == 0.0);
    CHECK(mae_subgradient(1e-300) == 1.0);
    CHECK(mae_subgradient(-3.0) == -1.0);
}

TEST_CASE("shift rule on a single RY observed in Z") {
    // x = -pi/2 undoes the Hadamard, so qubit 0 enters the ansatz in |0>
    // and <Z_0> = cos(phi_0) with the other angles at zero.
    const AnsatzConfig cfg{2, 1, EntanglementTopology::PairsThenTie, 1.0};
    const std::vector<double> x{-std::numbers::pi / 2, -std::numbers::pi / 2};
    auto p = ParameterVector::zeros(cfg);
    p.readout_weights = {1.0, 0.0};
    const std::size_t phi = angle_index(0, 0, Axis::Y, 2);
    for (auto [angle, expected] : {std::pair{std::numbers::pi / 2, -1.0}, std::pair{0.0, 0.0}}) {
        p.quantum[phi] = angle;
        CHECK(std::abs(predict(x, cfg, p) - std::cos(angle)) < 1e-12);
        const auto shift = output_gradient_parameter_shift(x, cfg, p);
        const auto adj = output_gradient_adjoint(x, cfg, p);
        CHECK(std::abs(shift.quantum[phi] - expected) < 1e-12);
        CHECK(std::abs(adj.quantum[phi] - expected) < 1e-12);
    }
}

TEST_CASE("adjoint agrees with the shift rule") {
    Rng rng(22);
    for (int trial = 0; trial < 60; ++trial) {
        const auto cfg = random_config(rng, 6, 3);
        const auto p = random_parameters(rng, cfg);
        const auto x = random_features(rng, cfg.n_qubits);
        const double target = rng.normal();
        const auto shift = parameter_shift_gradient(x, cfg, p, target);
        const auto adj = adjoint_gradient(x, cfg, p, target);
        CHECK(max_abs_diff(shift.flatten(), adj.flatten()) < 1e-8);
    }
}

TEST_CASE("shift rule agrees with central differences away from the kink") {
    Rng rng(23);
    int checked = 0;
    while (checked < 20) {
        const auto cfg = random_config(rng, 4, 2);
        const auto p = random_parameters(rng, cfg);
        const auto x = random_features(rng, cfg.n_qubits);
        const double target = rng.normal();
        if (std::abs(predict(x, cfg, p) - target) < 1e-3) {
            continue;
        }
        const auto grad = parameter_shift_gradient(x, cfg, p, target).flatten();
        const auto loss = [&](std::vector<double> flat) {
            return std::abs(predict(x, cfg, ParameterVector::unflatten(cfg, flat)) - target);
        };
        const auto flat = p.flatten();
        for (std::size_t i = 0; i < flat.size(); ++i) {
            const double fd = oracle::central_difference(loss, flat, i, 1e-4);
            CHECK(std::abs(fd - grad[i]) <= 1e-6 * std::max(1.0, std::abs(grad[i])));
        }
        ++checked;
    }
}

TEST_CASE("zero readout weights give a zero quantum gradient") {
    Rng rng(24);
    const AnsatzConfig cfg{4, 3, EntanglementTopology::CascadeRing, 1.0};
    auto p = random_parameters(rng, cfg);
    std::fill(p.readout_weights.begin(), p.readout_weights.end(), 0.0);
    const auto x = random_features(rng, 4);
    const auto g = adjoint_gradient(x, cfg, p, 5.0);
    for (double v : g.quantum) {
        CHECK(v == 0.0);
    }
    CHECK(g.readout_bias == -1.0);
}

TEST_CASE("gradient at the kink is zero") {
    const AnsatzConfig cfg{2, 1, EntanglementTopology::PairsThenTie, 1.0};
    Rng rng(25);
    const auto p = random_parameters(rng, cfg);
    const auto x = random_features(rng, 2);
    const double y = predict(x, cfg, p);
    const auto g = adjoint_gradient(x, cfg, p, y);
    for (double v : g.flatten()) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("bit-linear map equals the CNOT sequence on basis indices") {
    for (auto topo : {EntanglementTopology::PairsThenTie, EntanglementTopology::CascadeRing}) {
        for (int n : {2, 3, 5, 8, 11}) {
            const auto cnots = build_entanglement(topo, n);
            const auto map = BitLinearMap::from_cnots(cnots, n);
            for (std::uint32_t k = 0; k < (1U << n); ++k) {
                std::uint32_t y = k;
                for (const auto &g : cnots) {
                    if ((y >> g.control) & 1U) {
                        y ^= 1U << g.target;
                    }
                }
                REQUIRE(map(k) == y);
            }
        }
    }
}

TEST_CASE("layered engine matches the gate-list simulator") {
    Rng rng(26);
    for (int trial = 0; trial < 40; ++trial) {
        auto cfg = random_config(rng, 9, 3);
        cfg.input_scale = trial % 2 == 0 ? 1.0 : 0.7;
        const auto p = random_parameters(rng, cfg);
        const auto x = random_features(rng, cfg.n_qubits);
        LayeredQnn engine(cfg);
        const double y = engine.forward(x, p);
        CHECK(std::abs(y - predict(x, cfg, p)) < 1e-12);
        const auto ref = simulate(x, cfg, p);
        const auto state = engine.final_state();
        double diff = 0.0;
        for (std::size_t i = 0; i < state.size(); ++i) {
            diff = std::max(diff, std::abs(state[i] - ref[i]));
        }
        CHECK(diff < 1e-12);

        auto grad = ParameterVector::zeros(cfg);
        engine.backward(p, 1.0, grad);
        const auto adj = output_gradient_adjoint(x, cfg, p);
        CHECK(max_abs_diff(grad.flatten(), adj.flatten()) < 1e-10);
    }
}

TEST_CASE("layered engine accumulates with a scale") {
    Rng rng(27);
    const AnsatzConfig cfg{5, 2, EntanglementTopology::PairsThenTie, 1.0};
    const auto p = random_parameters(rng, cfg);
    LayeredQnn engine(cfg);
    auto grad = ParameterVector::zeros(cfg);
    std::vector<double> expected(cfg.trainable_parameter_count(), 0.0);
    for (double scale : {0.5, -1.25}) {
        const auto x = random_features(rng, 5);
        engine.forward(x, p);
        engine.backward(p, scale, grad);
        const auto g = output_gradient_adjoint(x, cfg, p).flatten();
        for (std::size_t i = 0; i < g.size(); ++i) {
            expected[i] += scale * g[i];
        }
    }
    CHECK(max_abs_diff(grad.flatten(), expected) < 1e-10);
}

TEST_CASE("layered engine past the threading threshold") {
    Rng rng(28);
    const AnsatzConfig cfg{16, 2, EntanglementTopology::CascadeRing, 1.0};
    const auto p = random_parameters(rng, cfg);
    const auto x = random_features(rng, 16);
    LayeredQnn engine(cfg);
    const double y = engine.forward(x, p);
    CHECK(std::abs(y - predict(x, cfg, p)) < 1e-12);
    auto grad = ParameterVector::zeros(cfg);
    engine.backward(p, 1.0, grad);
    CHECK(max_abs_diff(grad.flatten(), output_gradient_adjoint(x, cfg, p).flatten()) < 1e-10);

    const int saved = omp_get_max_threads();
    omp_set_num_threads(3);
    LayeredQnn threaded(cfg);
    const double y3 = threaded.forward(x, p);
    auto grad3 = ParameterVector::zeros(cfg);
    threaded.backward(p, 1.0, grad3);
    omp_set_num_threads(saved);
    CHECK(y3 == y);
    CHECK(grad3 == grad);
}
