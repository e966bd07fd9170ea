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
 * Dataset ingestion and the synthetic monthly generator.
 *
 * CSV schema: header `year,month,target,<feature...>`, one row per month in
 * increasing order, empty feature cells mean "missing".
 */
#pragma once

#include "qforecast/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace qforecast {

/// ParseError (with line number) on malformed rows; ValidationError on
/// duplicate or out-of-order months.
Dataset load_csv(const std::filesystem::path &path);
Dataset parse_csv(std::istream &in);

/// Writes the schema above; values use round-trip precision.
void write_csv(const Dataset &d, const std::filesystem::path &path);
void write_csv(const Dataset &d, std::ostream &out);

struct SyntheticConfig {
    std::uint64_t seed = 0;
    int n_months = 52;
    int n_features = 25;
    /// Columns whose first 12 months are missing.
    int n_missing_2019 = 6;
    /// One complete column ramps to 100x over the last five months.
    bool exploding_feature = true;
    /// Level drop in months 15-20.
    bool covid_shock = true;
    int start_year = 2019;

    void validate() const;
};

/**
 * Seeded synthetic dataset with the structure of the vehicle-financing
 * series: three AR(1) macro factors and a seasonal cycle drive positively
 * valued features and a target of order 2e4.
 */
Dataset generate_synthetic(const SyntheticConfig &cfg);

/// Column index of the exploding feature chosen by generate_synthetic,
/// -1 when the config disables it.
int exploding_column(const SyntheticConfig &cfg);

} // namespace qforecast
