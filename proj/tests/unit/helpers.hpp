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

#include "fddcsi/array_geometry.hpp"
#include "fddcsi/types.hpp"

#include <random>

namespace fddcsi::test
{
    inline CMatrix random_cmatrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> N(0.0, 1.0);
        CMatrix M(rows, cols);
        for (Eigen::Index i = 0; i < M.size(); ++i)
        {
            const double re = N(rng), im = N(rng);
            M(i) = cdouble(re, im);
        }
        return M;
    }

    inline UpaConfig upa(int rows, int cols, int pols, double dh_wl, double dv_wl, double wavelength = 1.0)
    {
        UpaConfig u;
        u.rows = rows;
        u.cols = cols;
        u.polarizations = pols;
        u.spacing_h = dh_wl * wavelength;
        u.spacing_v = dv_wl * wavelength;
        if (pols == 2)
            u.slant_angles = {pi / 4, -pi / 4};
        return u;
    }

    inline CarrierConfig carrier(int subbands, int width = 48)
    {
        CarrierConfig c;
        c.subband_count = subbands;
        c.subband_width = width;
        return c;
    }

    // Hermitian PSD with the given spectrum and a random unitary eigenbasis
    inline CMatrix random_psd(const RVector &spectrum, std::mt19937_64 &rng)
    {
        const Eigen::Index n = spectrum.size();
        Eigen::HouseholderQR<CMatrix> qr(random_cmatrix(n, n, rng));
        const CMatrix Q = qr.householderQ();
        return Q * spectrum.cast<cdouble>().asDiagonal() * Q.adjoint();
    }
}
