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

// Random inputs shared by unit and acceptance tests.
#pragma once

#include "qforecast/circuit.hpp"
#include "qforecast/pipeline.hpp"
#include "qforecast/rng.hpp"
#include "qforecast/statevector.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace testing_support {

using namespace qforecast;

inline Gate random_gate(Rng &rng, int n) {
    const int kinds = n >= 2 ? 5 : 4;
    const auto kind = static_cast<GateKind>(rng.below(static_cast<std::uint64_t>(kinds)));
    const int target = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const double angle = rng.uniform(-2 * std::numbers::pi, 2 * std::numbers::pi);
    switch (kind) {
    case GateKind::H: return Gate::h(target);
    case GateKind::RX: return Gate::rx(target, angle);
    case GateKind::RY: return Gate::ry(target, angle);
    case GateKind::RZ: return Gate::rz(target, angle);
    case GateKind::CNOT: {
        int control = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
        if (control >= target) {
            ++control;
        }
        return Gate::cnot(control, target);
    }
    }
    return Gate::h(target);
}

inline std::vector<Gate> random_circuit(Rng &rng, int n, int length) {
    std::vector<Gate> gates;
    for (int i = 0; i < length; ++i) {
        gates.push_back(random_gate(rng, n));
    }
    return gates;
}

inline std::vector<Complex> random_amplitudes(Rng &rng, int n) {
    std::vector<Complex> a(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &z : a) {
        z = {rng.normal(), rng.normal()};
        norm += std::norm(z);
    }
    for (auto &z : a) {
        z /= std::sqrt(norm);
    }
    return a;
}

inline ParameterVector random_parameters(Rng &rng, const AnsatzConfig &cfg) {
    auto p = ParameterVector::zeros(cfg);
    for (auto &a : p.quantum) {
        a = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    for (auto &w : p.readout_weights) {
        w = rng.uniform(-1.0, 1.0);
    }
    p.readout_bias = rng.uniform(-0.5, 0.5);
    return p;
}

inline std::vector<double> random_features(Rng &rng, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto &v : x) {
        v = rng.normal();
    }
    return x;
}

/// Model-ready data with Gaussian features and a target that depends on
/// them smoothly. Months start at 2019-01.
inline PreparedData random_prepared(Rng &rng, std::size_t rows, int features,
                                    std::size_t train_rows,
                                    std::size_t validation_rows) {
    PreparedData d;
    d.features.resize(static_cast<Eigen::Index>(rows), features);
    for (Eigen::Index r = 0; r < d.features.rows(); ++r) {
        double y = 0.0;
        for (Eigen::Index c = 0; c < features; ++c) {
            d.features(r, c) = rng.normal();
            y += std::sin(d.features(r, c)) / static_cast<double>(c + 1);
        }
        d.target_std.push_back(y + 0.1 * rng.normal());
        d.months.push_back(YearMonth{2019 + static_cast<int>(r / 12),
                                     1 + static_cast<int>(r % 12)});
    }
    d.target_scaler.mean = Eigen::VectorXd::Constant(1, 20000.0);
    d.target_scaler.stddev = Eigen::VectorXd::Constant(1, 3000.0);
    d.target = destandardize(d.target_scaler, d.target_std);
    d.train_rows = train_rows;
    d.validation_rows = validation_rows;
    return d;
}

} // namespace testing_support
