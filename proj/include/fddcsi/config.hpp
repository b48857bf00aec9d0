// SPDX-License-Identifier: Apache-2.0
//
// fddcsi: wideband FDD CSI acquisition with partial channel reciprocity
// Copyright (C) 2026 The fddcsi authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "fddcsi/link_sim.hpp"
#include "fddcsi/support.hpp"

#include <string>
#include <utility>
#include <vector>

namespace fddcsi
{
    inline constexpr const char *version_string = "1.0.0";

    struct RankCheckConfig
    {
        AngularSupport support = AngularSupport::full_range();
        double spacing_h_wavelengths = 0.5;
        double spacing_v_wavelengths = 0.5;
        std::vector<int> sizes{8, 16, 32};
        double energy_fraction = 0.99;
        int quadrature_order = 64;
        std::vector<int> frequency_subbands{64, 128, 256};
        double frequency_spacing = 360e3; // Hz
        std::vector<std::pair<double, double>> delay_intervals{{0.0, 2e-6}};
    };

    struct ExperimentConfig
    {
        EvaluationConfig evaluation;
        RankCheckConfig rank_check;
        std::string output_dir = "results";
    };

    ExperimentConfig default_experiment_config();

    // Strict JSON: unknown keys and type mismatches are errors naming the offending path
    ExperimentConfig parse_experiment_config(const std::string &text, const std::string &origin = "config");
    ExperimentConfig load_experiment_config(const std::string &path);

    // Normalized JSON echo of every effective setting
    std::string config_to_json(const ExperimentConfig &cfg);
}
