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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fddcsi
{
    struct PathPhases
    {
        double theta_theta = 0.0, theta_phi = 0.0, phi_theta = 0.0, phi_phi = 0.0;
    };

    // Angles in radians, delay in seconds, power linear, xpr linear (infinite for co-polar only)
    struct Path
    {
        double zod = pi / 2, aod = 0.0, zoa = pi / 2, aoa = 0.0;
        double delay = 0.0;
        double power = 1.0;
        double xpr = 1e300;
        bool los = false;
        PathPhases ul, dl;

        const PathPhases &phases(LinkEnd link) const { return link == LinkEnd::Uplink ? ul : dl; }
        PathPhases &phases(LinkEnd link) { return link == LinkEnd::Uplink ? ul : dl; }
    };

    struct Velocity
    {
        double speed = 0.0; // m/s
        double azimuth = 0.0, zenith = pi / 2;
        Eigen::Vector3d vector() const;
    };

    struct PathSet
    {
        std::vector<Path> paths;
        Velocity velocity;
        std::string model;

        size_t size() const { return paths.size(); }
        double total_power() const;
        void validate() const;
    };

    // UE antennas, co-located unless positions are given (meters)
    struct UeArrayConfig
    {
        std::vector<double> slant_angles{0.0, pi / 2};
        std::vector<Eigen::Vector3d> positions;
        FieldPattern pattern = FieldPattern::Isotropic;

        int antenna_count() const { return (int)slant_angles.size(); }
        void validate() const;
    };

    struct WidebandChannel
    {
        CMatrix matrix; // N_t x N_f
        LinkEnd link = LinkEnd::Downlink;
        double time = 0.0;
        int ue_antenna = 0;
    };

    // Clustered-delay-line paths from the named table, unit total power, random UL and DL phases
    PathSet generate_cdl_paths(const std::string &model, double delay_spread, uint64_t seed);

    // Shifts every path's angles, azimuths wrapped to [-pi, pi), zeniths reflected into [0, pi]
    void translate_angles(PathSet &set, double d_aod, double d_aoa = 0.0, double d_zod = 0.0, double d_zoa = 0.0);

    // M equal-power paths drawn uniformly over the support, co-polar, random arrival directions
    PathSet sample_support_paths(const AngularDelaySupport &support, int count, uint64_t seed);

    // Complex gain of one path at every BS polarization (length N_p), including Doppler and UE position phase
    CVector path_coefficient(const Path &path, const Velocity &velocity, LinkEnd link, double time,
                             const UpaConfig &upa, const UeArrayConfig &ue, int ue_antenna, double wavelength);

    // Phase-independent decomposition: coefficient = sum_t terms[t] * exp(j phase_t), phases mutually independent
    std::vector<CVector> path_coupling_terms(const Path &path, const UpaConfig &upa, const UeArrayConfig &ue,
                                             int ue_antenna);

    WidebandChannel synthesize_channel(const PathSet &set, LinkEnd link, double time, const UpaConfig &upa,
                                       const CarrierConfig &carrier, const UeArrayConfig &ue, int ue_antenna);

    std::vector<WidebandChannel> synthesize_all_antennas(const PathSet &set, LinkEnd link, double time,
                                                         const UpaConfig &upa, const CarrierConfig &carrier,
                                                         const UeArrayConfig &ue);

    // Column stacking: index = k * N_t + i
    CVector vectorize(const CMatrix &H);
    CMatrix unvectorize(const CVector &h, int antennas, int subbands);

    // Fresh uniform phases on one link; the other link is untouched
    PathSet redraw_phases(const PathSet &set, LinkEnd link, uint64_t seed);
    void draw_phases(Path &path, LinkEnd link, std::mt19937_64 &rng);
}
