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

#include "fddcsi/types.hpp"

#include <vector>

namespace fddcsi
{
    enum class FieldPattern
    {
        Isotropic,
        ThreeGpp // Single-element directional pattern, 8 dBi boresight gain
    };

    FieldPattern parse_field_pattern(const std::string &name);
    std::string to_string(FieldPattern pattern);

    // Polarized field components (F_theta, F_phi) of a slanted element
    struct FieldComponents
    {
        double theta, phi;
    };
    FieldComponents element_field(FieldPattern pattern, double theta, double phi, double slant);

    // Uniform planar array. Antenna index = p * (N_h * N_v) + h * N_v + v.
    struct UpaConfig
    {
        int rows = 1;                    // N_v
        int cols = 1;                    // N_h
        int polarizations = 1;           // N_p
        double spacing_h = 0.0;          // Meters
        double spacing_v = 0.0;          // Meters
        std::vector<double> slant_angles; // Radians, one per polarization
        FieldPattern element_pattern = FieldPattern::Isotropic;

        int elements_per_polarization() const { return rows * cols; }
        int total_antennas() const { return rows * cols * polarizations; }
        void validate() const;
    };

    struct CarrierConfig
    {
        double dl_center_frequency = 3.5e9;
        double ul_center_frequency = 3.4e9;
        double subcarrier_spacing = 30e3;
        int subband_count = 13;   // N_f
        int subband_width = 48;   // Subcarriers per subband

        double subband_spacing() const { return subcarrier_spacing * subband_width; }
        double center_frequency(LinkEnd link) const;
        double wavelength(LinkEnd link) const;
        RVector subband_frequencies(LinkEnd link) const;
        void validate() const;
    };

    // Horizontal response, length N_h
    CVector steering_h(double theta, double phi, const UpaConfig &upa, double wavelength);

    // Vertical response, length N_v
    CVector steering_v(double theta, const UpaConfig &upa, double wavelength);

    // steering_h (x) steering_v, length N_h * N_v
    CVector steering_3d(double theta, double phi, const UpaConfig &upa, double wavelength);

    // Per-subband delay response exp(-j 2 pi f_k tau), length N_f
    CVector delay_response(double tau, const CarrierConfig &carrier, LinkEnd link);

    // Unitary DFT matrix, E[m, n] = exp(-2 pi j m n / K) / sqrt(K)
    CMatrix dft_basis(int K);

    // Block-diagonal per polarization of E(N_h) (x) E(N_v)
    CMatrix spatial_dft_basis(const UpaConfig &upa);

    CMatrix frequency_dft_basis(const CarrierConfig &carrier);
}
