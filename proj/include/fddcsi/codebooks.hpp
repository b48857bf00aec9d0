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

#include "fddcsi/covariance.hpp"
#include "fddcsi/multipath_channel.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace fddcsi
{
    enum class Scheme
    {
        Perfect,
        Pcr,
        PcrE,
        PcrEUplink, // PCR-E with bases from uplink covariances
        PcrD,
        Baseline
    };

    std::string to_string(Scheme scheme);
    Scheme parse_scheme(const std::string &name);

    // Port n transmits w_n = f_n (x) s_n; the UE reports g_n = s_n^T H f_n (or w_n^T vec(H) for joint precoders)
    struct PortPrecoderSet
    {
        Scheme scheme = Scheme::Pcr;
        int antennas = 0;
        int subbands = 0;
        CMatrix joint;     // (N_t N_f) x N_a, joint precoders
        CMatrix spatial;   // N_t x N_a, factored precoders
        CMatrix frequency; // N_f x N_a, factored precoders
        std::vector<std::pair<int, int>> positions; // (spatial index, frequency index) of factored ports

        int port_count() const;
        bool factored() const { return joint.rows() == 0; }
        CVector port_vector(int n) const;
        CVector subband_precoder(int n, int k) const;
    };

    // Top `count` entries of a non-negative matrix, ties to the smaller (row, col) in row-major order
    std::vector<std::pair<int, int>> top_positions(const RMatrix &power, int count);

    PortPrecoderSet pcr_precoders(const EigenBasis &joint, int ports, int antennas, int subbands);

    // Sum over samples of |U_S^H H U_F^*|^2
    RMatrix eigen_domain_power(const EigenBasis &spatial, const EigenBasis &frequency,
                               const std::vector<WidebandChannel> &samples);
    PortPrecoderSet pcre_select(const EigenBasis &spatial, const EigenBasis &frequency,
                                const std::vector<WidebandChannel> &samples, int ports,
                                Scheme tag = Scheme::PcrE);

    // Sum over samples of |S^H H F|^2
    RMatrix dft_domain_power(const CMatrix &S, const CMatrix &F, const std::vector<WidebandChannel> &samples);
    PortPrecoderSet pcrd_select(const CMatrix &S, const CMatrix &F, const std::vector<WidebandChannel> &samples,
                                int ports);

    struct MeasurementConfig
    {
        int pilot_length = 8;                // N_x
        double pilot_snr_db = 1e300;        // Per-subband pilot SNR, 1e300 = noiseless

        bool noiseless() const { return pilot_snr_db >= 1e299; }
        double estimate_variance() const;    // 1 / (N_x SNR)
        void validate() const;
    };

    struct OpCounter
    {
        long long port_subband_pairs = 0;
        long long pilot_correlations = 0;
    };

    // Port coefficients as summed per-subband estimates, one (port, subband) visit each
    CVector ue_measure(const CMatrix &H, const PortPrecoderSet &ports, const MeasurementConfig &cfg,
                       std::mt19937_64 &rng, OpCounter *counter = nullptr);

    // Channel estimate from non-precoded pilots, each entry with estimation noise of variance sigma^2_est
    CMatrix ue_channel_estimate(const CMatrix &H, const MeasurementConfig &cfg, std::mt19937_64 &rng);

    // Reconstruction sum_n g_n conj(w_n), N_t x N_f
    CMatrix reconstruct(const CVector &coefficients, const PortPrecoderSet &ports);

    double nmse(const CMatrix &H, const CMatrix &H_hat);
}
