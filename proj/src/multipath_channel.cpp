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

#include "fddcsi/multipath_channel.hpp"
#include "fddcsi/cdl_tables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fddcsi
{
    static constexpr double ray_offsets[20] = {0.0447, -0.0447, 0.1413, -0.1413, 0.2492, -0.2492, 0.3715,
                                               -0.3715, 0.5129, -0.5129, 0.6797, -0.6797, 0.8844, -0.8844,
                                               1.1481, -1.1481, 1.5195, -1.5195, 2.1551, -2.1551};

    Eigen::Vector3d Velocity::vector() const
    {
        return speed * Eigen::Vector3d(std::sin(zenith) * std::cos(azimuth), std::sin(zenith) * std::sin(azimuth),
                                       std::cos(zenith));
    }

    double PathSet::total_power() const
    {
        double p = 0.0;
        for (const auto &x : paths)
            p += x.power;
        return p;
    }

    void PathSet::validate() const
    {
        if (paths.empty())
            throw std::invalid_argument("PathSet: no paths");
        for (size_t i = 0; i < paths.size(); ++i)
        {
            const auto &p = paths[i];
            const std::string at = "PathSet: path " + std::to_string(i);
            if (!std::isfinite(p.zod) || !std::isfinite(p.aod) || !std::isfinite(p.zoa) || !std::isfinite(p.aoa))
                throw std::invalid_argument(at + " has a non-finite angle");
            if (!std::isfinite(p.delay) || p.delay < 0.0)
                throw std::invalid_argument(at + " has an invalid delay");
            if (!std::isfinite(p.power) || p.power < 0.0)
                throw std::invalid_argument(at + " has an invalid power");
            if (!(p.xpr > 0.0))
                throw std::invalid_argument(at + " has a non-positive cross-polarization ratio");
        }
    }

    void UeArrayConfig::validate() const
    {
        if (slant_angles.empty())
            throw std::invalid_argument("UeArrayConfig: at least one antenna is required");
        if (!positions.empty() && positions.size() != slant_angles.size())
            throw std::invalid_argument("UeArrayConfig: positions must match the antenna count");
    }

    static double reflect_zenith(double z)
    {
        z = std::fmod(z, 2.0 * pi);
        if (z < 0.0)
            z += 2.0 * pi;
        return z > pi ? 2.0 * pi - z : z;
    }

    void draw_phases(Path &path, LinkEnd link, std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> U(-pi, pi);
        PathPhases &ph = path.phases(link);
        ph.theta_theta = U(rng);
        ph.theta_phi = U(rng);
        ph.phi_theta = U(rng);
        ph.phi_phi = U(rng);
        if (path.los)
            ph.phi_phi = ph.theta_theta + pi;
    }

    PathSet generate_cdl_paths(const std::string &model, double delay_spread, uint64_t seed)
    {
        if (!std::isfinite(delay_spread) || delay_spread < 0.0)
            throw std::invalid_argument("generate_cdl_paths: delay spread must be finite and non-negative");
        const CdlTable &t = cdl_table(model);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> N01(0.0, 1.0);

        double total = 0.0;
        for (const auto &c : t.clusters)
            total += std::pow(10.0, 0.1 * c.power_db);

        PathSet set;
        set.model = model;
        std::vector<int> perm(t.rays_per_cluster);
        for (const auto &c : t.clusters)
        {
            const double pc = std::pow(10.0, 0.1 * c.power_db) / total;
            const double tau = c.delay * delay_spread;
            if (c.los)
            {
                Path p;
                p.zod = deg2rad(c.zod), p.aod = wrap_angle(deg2rad(c.aod));
                p.zoa = deg2rad(c.zoa), p.aoa = wrap_angle(deg2rad(c.aoa));
                p.delay = tau, p.power = pc, p.xpr = 1e300, p.los = true;
                draw_phases(p, LinkEnd::Uplink, rng);
                draw_phases(p, LinkEnd::Downlink, rng);
                set.paths.push_back(p);
                continue;
            }
            std::vector<std::vector<int>> order(4);
            for (auto &o : order)
            {
                std::iota(perm.begin(), perm.end(), 0);
                std::shuffle(perm.begin(), perm.end(), rng);
                o = perm;
            }
            for (int m = 0; m < t.rays_per_cluster; ++m)
            {
                Path p;
                p.aod = wrap_angle(deg2rad(c.aod + t.c_asd * ray_offsets[order[0][m]]));
                p.aoa = wrap_angle(deg2rad(c.aoa + t.c_asa * ray_offsets[order[1][m]]));
                p.zod = reflect_zenith(deg2rad(c.zod + t.c_zsd * ray_offsets[order[2][m]]));
                p.zoa = reflect_zenith(deg2rad(c.zoa + t.c_zsa * ray_offsets[order[3][m]]));
                p.delay = tau;
                p.power = pc / t.rays_per_cluster;
                p.xpr = std::pow(10.0, 0.1 * (t.xpr_mean_db + t.xpr_std_db * N01(rng)));
                draw_phases(p, LinkEnd::Uplink, rng);
                draw_phases(p, LinkEnd::Downlink, rng);
                set.paths.push_back(p);
            }
        }
        return set;
    }

    void translate_angles(PathSet &set, double d_aod, double d_aoa, double d_zod, double d_zoa)
    {
        for (auto &p : set.paths)
        {
            p.aod = wrap_angle(p.aod + d_aod);
            p.aoa = wrap_angle(p.aoa + d_aoa);
            p.zod = reflect_zenith(p.zod + d_zod);
            p.zoa = reflect_zenith(p.zoa + d_zoa);
        }
    }

    PathSet sample_support_paths(const AngularDelaySupport &support, int count, uint64_t seed)
    {
        if (count < 1)
            throw std::invalid_argument("sample_support_paths: path count must be >= 1");
        support.validate();
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        PathSet set;
        set.model = "support";
        for (int m = 0; m < count; ++m)
        {
            const SupportPoint x = sample_support_point(support, rng);
            Path p;
            p.zod = x.theta, p.aod = x.phi, p.delay = x.tau;
            p.zoa = std::acos(1.0 - 2.0 * U(rng));
            p.aoa = -pi + 2.0 * pi * U(rng);
            p.power = 1.0 / count;
            draw_phases(p, LinkEnd::Uplink, rng);
            draw_phases(p, LinkEnd::Downlink, rng);
            set.paths.push_back(p);
        }
        return set;
    }

    std::vector<CVector> path_coupling_terms(const Path &path, const UpaConfig &upa, const UeArrayConfig &ue,
                                             int ue_antenna)
    {
        if (ue_antenna < 0 || ue_antenna >= ue.antenna_count())
            throw std::invalid_argument("UE antenna index out of range");
        const int P = upa.polarizations;
        const FieldComponents rx = element_field(ue.pattern, path.zoa, path.aoa, ue.slant_angles[ue_antenna]);
        std::vector<FieldComponents> tx(P);
        for (int p = 0; p < P; ++p)
            tx[p] = element_field(upa.element_pattern, path.zod, path.aod, upa.slant_angles.empty() ? 0.0 : upa.slant_angles[p]);
        const double amp = std::sqrt(path.power);
        const double cross = path.xpr >= 1e300 ? 0.0 : std::sqrt(1.0 / path.xpr);

        std::vector<CVector> terms;
        if (path.los)
        {
            CVector v(P);
            for (int p = 0; p < P; ++p)
                v[p] = amp * (rx.theta * tx[p].theta - rx.phi * tx[p].phi);
            terms.push_back(v);
            return terms;
        }
        const double ra[2] = {rx.theta, rx.phi};
        const double m[2][2] = {{1.0, cross}, {cross, 1.0}};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
            {
                if (m[a][b] == 0.0)
                    continue;
                CVector v(P);
                for (int p = 0; p < P; ++p)
                    v[p] = amp * ra[a] * m[a][b] * (b == 0 ? tx[p].theta : tx[p].phi);
                terms.push_back(v);
            }
        return terms;
    }

    CVector path_coefficient(const Path &path, const Velocity &velocity, LinkEnd link, double time,
                             const UpaConfig &upa, const UeArrayConfig &ue, int ue_antenna, double wavelength)
    {
        if (ue_antenna < 0 || ue_antenna >= ue.antenna_count())
            throw std::invalid_argument("UE antenna index out of range");
        const int P = upa.polarizations;
        const FieldComponents rx = element_field(ue.pattern, path.zoa, path.aoa, ue.slant_angles[ue_antenna]);
        const PathPhases &ph = path.phases(link);
        const double cross = path.xpr >= 1e300 ? 0.0 : std::sqrt(1.0 / path.xpr);
        const cdouble m_tt = std::polar(1.0, ph.theta_theta), m_pp = std::polar(1.0, ph.phi_phi);
        const cdouble m_tp = std::polar(cross, ph.theta_phi), m_pt = std::polar(cross, ph.phi_theta);

        const Eigen::Vector3d r(std::sin(path.zoa) * std::cos(path.aoa), std::sin(path.zoa) * std::sin(path.aoa),
                                std::cos(path.zoa));
        double phase = 2.0 * pi * r.dot(velocity.vector()) * time / wavelength;
        if (!ue.positions.empty())
            phase += 2.0 * pi * r.dot(ue.positions[ue_antenna]) / wavelength;
        const cdouble common = std::sqrt(path.power) * std::polar(1.0, phase);

        CVector c(P);
        for (int p = 0; p < P; ++p)
        {
            const FieldComponents tx =
                element_field(upa.element_pattern, path.zod, path.aod, upa.slant_angles.empty() ? 0.0 : upa.slant_angles[p]);
            const cdouble t0 = m_tt * tx.theta + m_tp * tx.phi;
            const cdouble t1 = m_pt * tx.theta + m_pp * tx.phi;
            c[p] = common * (rx.theta * t0 + rx.phi * t1);
        }
        return c;
    }

    WidebandChannel synthesize_channel(const PathSet &set, LinkEnd link, double time, const UpaConfig &upa,
                                       const CarrierConfig &carrier, const UeArrayConfig &ue, int ue_antenna)
    {
        if (ue_antenna < 0 || ue_antenna >= ue.antenna_count())
            throw std::invalid_argument("synthesize_channel: UE antenna index out of range");
        const double lambda = carrier.wavelength(link);
        const int M = (int)set.size(), L = upa.elements_per_polarization(), P = upa.polarizations;
        const int Nf = carrier.subband_count;
        CMatrix A(L, M), B(M, Nf), C(P, M);
        for (int m = 0; m < M; ++m)
        {
            const Path &p = set.paths[m];
            A.col(m) = steering_3d(p.zod, p.aod, upa, lambda);
            B.row(m) = delay_response(p.delay, carrier, link).transpose();
            C.col(m) = path_coefficient(p, set.velocity, link, time, upa, ue, ue_antenna, lambda);
        }
        WidebandChannel out;
        out.link = link, out.time = time, out.ue_antenna = ue_antenna;
        out.matrix.resize(upa.total_antennas(), Nf);
        for (int p = 0; p < P; ++p)
            out.matrix.middleRows(p * L, L).noalias() = A * C.row(p).transpose().asDiagonal() * B;
        return out;
    }

    std::vector<WidebandChannel> synthesize_all_antennas(const PathSet &set, LinkEnd link, double time,
                                                         const UpaConfig &upa, const CarrierConfig &carrier,
                                                         const UeArrayConfig &ue)
    {
        std::vector<WidebandChannel> out;
        for (int u = 0; u < ue.antenna_count(); ++u)
            out.push_back(synthesize_channel(set, link, time, upa, carrier, ue, u));
        return out;
    }

    CVector vectorize(const CMatrix &H)
    {
        return Eigen::Map<const CVector>(H.data(), H.size());
    }

    CMatrix unvectorize(const CVector &h, int antennas, int subbands)
    {
        if (antennas < 1 || subbands < 1 || h.size() != (Eigen::Index)antennas * subbands)
            throw std::invalid_argument("unvectorize: length " + std::to_string(h.size()) + " is not " +
                                        std::to_string(antennas) + " x " + std::to_string(subbands));
        return Eigen::Map<const CMatrix>(h.data(), antennas, subbands);
    }

    PathSet redraw_phases(const PathSet &set, LinkEnd link, uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        PathSet out = set;
        for (auto &p : out.paths)
            draw_phases(p, link, rng);
        return out;
    }
}
