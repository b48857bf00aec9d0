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
#include "fddcsi/support.hpp"

#include <utility>
#include <vector>

namespace fddcsi
{
    // Normalized rank law of the spatial covariance for an angular support
    double rho_spatial(const AngularSupport &support, const UpaConfig &upa, double wavelength);

    // Closed form for a single box with |phi| <= pi/2
    double rho_spatial_box(double theta_min, double theta_max, double phi_min, double phi_max, const UpaConfig &upa,
                           double wavelength);

    // Asymptotic spatial rank for the full angular range: pi * L_h * L_v with L = N D / lambda
    double rank_spatial_fullrange(const UpaConfig &upa, double wavelength);

    // Delay-occupancy ratio, delay intervals in seconds, must not overlap
    double rho_frequency(const std::vector<std::pair<double, double>> &delay_intervals, double subband_spacing);

    double rho_joint(const AngularDelaySupport &support, const UpaConfig &upa, const CarrierConfig &carrier,
                     LinkEnd link = LinkEnd::Downlink);

    // ceil(rho_J N_h N_v N_f) per polarization, times N_p
    int feedback_bound(const AngularDelaySupport &support, const UpaConfig &upa, const CarrierConfig &carrier,
                       LinkEnd link = LinkEnd::Downlink);

    struct RankConvergenceRow
    {
        int size = 0; // N_h = N_v
        int quadrature_order = 0;
        double rho = 0.0;
        int effective_rank = 0;
        double ratio = 0.0;
        double relative_gap = 0.0;
        double seconds = 0.0;
    };

    // Effective rank of the analytic spatial covariance over square arrays of growing size
    std::vector<RankConvergenceRow> rank_convergence(const AngularSupport &support, double spacing_h_wl,
                                                     double spacing_v_wl, const std::vector<int> &sizes, double gamma,
                                                     int quadrature_order = 64);
}
