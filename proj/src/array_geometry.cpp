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

#include "fddcsi/array_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fddcsi
{
    static double wrap_phi(double x)
    {
        double y = std::fmod(x + pi, 2.0 * pi);
        if (y < 0.0)
            y += 2.0 * pi;
        return y - pi;
    }

    std::string to_string(LinkEnd link)
    {
        return link == LinkEnd::Uplink ? "UL" : "DL";
    }

    FieldPattern parse_field_pattern(const std::string &name)
    {
        if (name == "isotropic")
            return FieldPattern::Isotropic;
        if (name == "3gpp")
            return FieldPattern::ThreeGpp;
        throw std::invalid_argument("unknown field pattern '" + name + "' (expected isotropic or 3gpp)");
    }

    std::string to_string(FieldPattern pattern)
    {
        return pattern == FieldPattern::Isotropic ? "isotropic" : "3gpp";
    }

    FieldComponents element_field(FieldPattern pattern, double theta, double phi, double slant)
    {
        double amp = 1.0;
        if (pattern == FieldPattern::ThreeGpp)
        {
            const double t = rad2deg(theta), p = rad2deg(wrap_phi(phi));
            const double av = -std::min(12.0 * ((t - 90.0) / 65.0) * ((t - 90.0) / 65.0), 30.0);
            const double ah = -std::min(12.0 * (p / 65.0) * (p / 65.0), 30.0);
            const double a = -std::min(-(av + ah), 30.0) + 8.0;
            amp = std::pow(10.0, a / 20.0);
        }
        return {amp * std::cos(slant), amp * std::sin(slant)};
    }

    void UpaConfig::validate() const
    {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("UpaConfig: rows and cols must be >= 1");
        if (polarizations < 1 || polarizations > 2)
            throw std::invalid_argument("UpaConfig: polarizations must be 1 or 2");
        if (!(spacing_h > 0.0) || !(spacing_v > 0.0) || !std::isfinite(spacing_h) || !std::isfinite(spacing_v))
            throw std::invalid_argument("UpaConfig: element spacing must be positive and finite");
        if (!slant_angles.empty() && (int)slant_angles.size() != polarizations)
            throw std::invalid_argument("UpaConfig: need one slant angle per polarization");
    }

    void CarrierConfig::validate() const
    {
        if (!(dl_center_frequency > 0.0) || !(ul_center_frequency > 0.0))
            throw std::invalid_argument("CarrierConfig: center frequencies must be positive");
        if (!(subcarrier_spacing > 0.0))
            throw std::invalid_argument("CarrierConfig: subcarrier spacing must be positive");
        if (subband_count < 1 || subband_width < 1)
            throw std::invalid_argument("CarrierConfig: subband count and width must be >= 1");
    }

    double CarrierConfig::center_frequency(LinkEnd link) const
    {
        return link == LinkEnd::Uplink ? ul_center_frequency : dl_center_frequency;
    }

    double CarrierConfig::wavelength(LinkEnd link) const
    {
        return speed_of_light / center_frequency(link);
    }

    RVector CarrierConfig::subband_frequencies(LinkEnd link) const
    {
        const double df = subband_spacing();
        const double f0 = center_frequency(link) - 0.5 * double(subband_count - 1) * df;
        RVector f(subband_count);
        for (int k = 0; k < subband_count; ++k)
            f[k] = f0 + double(k) * df;
        return f;
    }

    static void check_angle(double x, const char *name)
    {
        if (!std::isfinite(x))
            throw std::invalid_argument(std::string(name) + " must be finite");
    }

    CVector steering_h(double theta, double phi, const UpaConfig &upa, double wavelength)
    {
        check_angle(theta, "theta");
        check_angle(phi, "phi");
        const double u = std::sin(theta) * std::sin(phi);
        const double step = 2.0 * pi * upa.spacing_h / wavelength * u;
        CVector a(upa.cols);
        for (int n = 0; n < upa.cols; ++n)
            a[n] = std::polar(1.0, step * double(n));
        return a;
    }

    CVector steering_v(double theta, const UpaConfig &upa, double wavelength)
    {
        check_angle(theta, "theta");
        const double w = std::cos(theta);
        const double step = 2.0 * pi * upa.spacing_v / wavelength * w;
        CVector a(upa.rows);
        for (int n = 0; n < upa.rows; ++n)
            a[n] = std::polar(1.0, step * double(n));
        return a;
    }

    CVector steering_3d(double theta, double phi, const UpaConfig &upa, double wavelength)
    {
        const CVector ah = steering_h(theta, phi, upa, wavelength);
        const CVector av = steering_v(theta, upa, wavelength);
        CVector a(upa.cols * upa.rows);
        for (int h = 0; h < upa.cols; ++h)
            a.segment(h * upa.rows, upa.rows) = ah[h] * av;
        return a;
    }

    CVector delay_response(double tau, const CarrierConfig &carrier, LinkEnd link)
    {
        if (!std::isfinite(tau) || tau < 0.0)
            throw std::invalid_argument("delay_response: delay must be finite and non-negative");
        const RVector f = carrier.subband_frequencies(link);
        CVector b(f.size());
        for (Eigen::Index k = 0; k < f.size(); ++k)
            b[k] = std::polar(1.0, -2.0 * pi * std::fmod(f[k] * tau, 1.0));
        return b;
    }

    CMatrix dft_basis(int K)
    {
        if (K < 1)
            throw std::invalid_argument("dft_basis: K must be >= 1");
        CMatrix E(K, K);
        const double s = 1.0 / std::sqrt(double(K));
        for (int m = 0; m < K; ++m)
            for (int n = 0; n < K; ++n)
            {
                const long long mn = (long long)m * n % K;
                E(m, n) = std::polar(s, -2.0 * pi * double(mn) / double(K));
            }
        return E;
    }

    CMatrix spatial_dft_basis(const UpaConfig &upa)
    {
        const CMatrix Eh = dft_basis(upa.cols), Ev = dft_basis(upa.rows);
        const int L = upa.elements_per_polarization();
        CMatrix S = CMatrix::Zero(upa.total_antennas(), upa.total_antennas());
        for (int p = 0; p < upa.polarizations; ++p)
            for (int h1 = 0; h1 < upa.cols; ++h1)
                for (int h2 = 0; h2 < upa.cols; ++h2)
                    S.block(p * L + h1 * upa.rows, p * L + h2 * upa.rows, upa.rows, upa.rows) = Eh(h1, h2) * Ev;
        return S;
    }

    CMatrix frequency_dft_basis(const CarrierConfig &carrier)
    {
        return dft_basis(carrier.subband_count);
    }
}
