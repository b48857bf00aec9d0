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

#include "fddcsi/codebooks.hpp"
#include "fddcsi/feedback_report.hpp"
#include "fddcsi/multipath_channel.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fddcsi
{
    struct ScenarioConfig
    {
        UpaConfig bs;
        CarrierConfig carrier;
        UeArrayConfig ue;
        int ue_count = 8;
        std::vector<std::string> models{"CDL-A"}; // Assigned to UEs cyclically
        double delay_spread = 300e-9;
        double sector_half_width = deg2rad(60.0);  // Per-UE departure azimuth offset is uniform in +-this
        int streams_per_ue = 1;
        int ul_samples = 10;                       // N_c
        double ul_snr_db = 1e300;                  // Uplink sample SNR, 1e300 = noiseless
        double total_power = 1.0;
        MeasurementConfig measurement;
        QuantizerConfig quantizer;

        void validate() const;
    };

    // Defaults: 2 x 8 x 2 array at (0.5, 0.8) wavelengths, 3.5 / 3.4 GHz, 13 subbands
    ScenarioConfig default_scenario();

    // One PathSet per UE, carrying both uplink and downlink phases
    std::vector<PathSet> build_scenario(const ScenarioConfig &cfg, uint64_t drop_seed);

    // Eigen zero-forcing on one subband: ue_channels[u] is N_r x N_t, result N_t x (U N_s)
    CMatrix ezf_precoder(const std::vector<CMatrix> &ue_channels, int streams, double total_power);

    // Per-stream SINR with MMSE-IRC receivers, streams ordered UE-major
    std::vector<double> mmse_irc_sinr(const std::vector<CMatrix> &ue_channels, const CMatrix &W, int streams,
                                      double noise_power);

    double spectral_efficiency(const std::vector<double> &sinr);

    struct EvaluationConfig
    {
        ScenarioConfig scenario;
        std::vector<Scheme> schemes{Scheme::Perfect, Scheme::Pcr, Scheme::PcrE, Scheme::Baseline, Scheme::PcrD};
        std::vector<int> ports{16};
        std::vector<double> snr_db{0.0, 10.0, 20.0};
        int drops = 200;
        uint64_t seed = 1;
        int workers = 1;

        void validate() const;
    };

    // nmse[s][a] averaged over UEs and UE antennas, se[s][a][snr]
    struct DropOutcome
    {
        std::vector<std::vector<double>> nmse;
        std::vector<std::vector<std::vector<double>>> se;
    };

    DropOutcome evaluate_drop(const EvaluationConfig &cfg, int drop, bool with_se);

    struct SweepResult
    {
        double snr_db = 0.0;
        std::string scheme;
        int ports = 0;
        long long feedback_bits = 0;
        double mean_nmse = 0.0;
        double mean_se = 0.0;
        int drops = 0;
        double nmse_stderr = 0.0;
        double se_stderr = 0.0;
    };

    using ProgressFn = std::function<void(int done, int total)>;

    std::vector<DropOutcome> run_drops(const EvaluationConfig &cfg, bool with_se, const ProgressFn &progress = {});

    // One row per (SNR, scheme, N_a)
    std::vector<SweepResult> run_sweep(const EvaluationConfig &cfg, const ProgressFn &progress = {});

    // One row per (scheme, N_a), snr_db and mean_se unset
    std::vector<SweepResult> run_codebook_eval(const EvaluationConfig &cfg, const ProgressFn &progress = {});

    std::vector<SweepResult> summarize(const EvaluationConfig &cfg, const std::vector<DropOutcome> &drops, bool with_se);
}
