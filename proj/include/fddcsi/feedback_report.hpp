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

#include <string>
#include <vector>

namespace fddcsi
{
    enum class QuantizerMode
    {
        Exact,
        AmplitudePhase
    };

    struct QuantizerConfig
    {
        QuantizerMode mode = QuantizerMode::Exact;
        int amplitude_bits = 3;
        int phase_bits = 4;

        void validate() const;
    };

    // Cell index of r in [0, 1] on 2^bits uniform cells
    int quantize_amplitude(double r, int bits);
    double amplitude_level(int code, int bits);

    // Cell index on 2^bits uniform cells of (-pi, pi], exact ties to the smaller index
    int quantize_phase(double phase, int bits);
    double phase_level(int code, int bits);

    struct AntennaFeedback
    {
        float reference = 0.0f;          // Max |g| of the antenna, amplitude-phase mode only
        std::vector<int> amplitude_codes;
        std::vector<int> phase_codes;
        std::vector<cdouble> exact;      // Exact mode only
        bool degenerate = false;         // All-zero coefficients
    };

    struct FeedbackReport
    {
        Scheme scheme = Scheme::Pcr;
        int ports = 0;                   // N_a
        QuantizerConfig quantizer;
        int index_bits = 0;              // Width of one index field
        std::vector<AntennaFeedback> antennas;
        std::vector<int> indices;        // Baseline only, linear positions shared across UE antennas

        CVector coefficients(int antenna) const;
        void validate() const;
    };

    AntennaFeedback quantize(const CVector &g, const QuantizerConfig &cfg);
    CVector dequantize(const AntennaFeedback &a, const QuantizerConfig &cfg);

    // One report for all UE antennas of a precoded scheme
    FeedbackReport make_report(Scheme scheme, const std::vector<CVector> &per_antenna, const QuantizerConfig &cfg);

    // Type-II-like baseline: common strongest N_a positions of S^H H F over the UE antennas
    FeedbackReport baseline_report(const std::vector<CMatrix> &estimates, const CMatrix &S, const CMatrix &F, int ports,
                                   const QuantizerConfig &cfg);
    CMatrix baseline_reconstruct(const FeedbackReport &report, int antenna, const CMatrix &S, const CMatrix &F);

    // Line-oriented text record
    std::string serialize(const FeedbackReport &report);
    FeedbackReport parse_report(const std::string &text);

    // Payload bits: coefficient codes, per-antenna reference amplitudes, index fields
    long long feedback_bits(const FeedbackReport &report);
    long long feedback_bits(const std::string &serialized);

    // Payload bits of a report shape without building it
    long long feedback_bits(Scheme scheme, int ports, int ue_antennas, int antennas, int subbands,
                            const QuantizerConfig &cfg);
}
