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

#include "fddcsi/codebooks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fddcsi
{
    std::string to_string(Scheme scheme)
    {
        switch (scheme)
        {
        case Scheme::Perfect:
            return "perfect";
        case Scheme::Pcr:
            return "PCR";
        case Scheme::PcrE:
            return "PCR-E";
        case Scheme::PcrEUplink:
            return "PCR-E-UL";
        case Scheme::PcrD:
            return "PCR-D";
        case Scheme::Baseline:
            return "baseline";
        }
        return "?";
    }

    Scheme parse_scheme(const std::string &name)
    {
        for (Scheme s : {Scheme::Perfect, Scheme::Pcr, Scheme::PcrE, Scheme::PcrEUplink, Scheme::PcrD, Scheme::Baseline})
            if (to_string(s) == name)
                return s;
        throw std::invalid_argument("unknown scheme '" + name + "' (expected perfect, PCR, PCR-E, PCR-E-UL, PCR-D or baseline)");
    }

    int PortPrecoderSet::port_count() const
    {
        return int(factored() ? spatial.cols() : joint.cols());
    }

    CVector PortPrecoderSet::port_vector(int n) const
    {
        if (!factored())
            return joint.col(n);
        CVector w(Eigen::Index(antennas) * subbands);
        for (int k = 0; k < subbands; ++k)
            w.segment(Eigen::Index(k) * antennas, antennas) = frequency(k, n) * spatial.col(n);
        return w;
    }

    CVector PortPrecoderSet::subband_precoder(int n, int k) const
    {
        if (!factored())
            return joint.col(n).segment(Eigen::Index(k) * antennas, antennas);
        return frequency(k, n) * spatial.col(n);
    }

    std::vector<std::pair<int, int>> top_positions(const RMatrix &power, int count)
    {
        const Eigen::Index R = power.rows(), C = power.cols();
        if (count < 0 || count > R * C)
            throw std::invalid_argument("port count " + std::to_string(count) + " outside 0.." + std::to_string(R * C));
        std::vector<Eigen::Index> idx(R * C);
        std::iota(idx.begin(), idx.end(), 0);
        auto value = [&](Eigen::Index i)
        { return power(i / C, i % C); };
        std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b)
                         { return value(a) > value(b); });
        std::vector<std::pair<int, int>> out(count);
        for (int n = 0; n < count; ++n)
            out[n] = {int(idx[n] / C), int(idx[n] % C)};
        return out;
    }

    PortPrecoderSet pcr_precoders(const EigenBasis &joint, int ports, int antennas, int subbands)
    {
        if (joint.vectors.rows() != Eigen::Index(antennas) * subbands)
            throw std::invalid_argument("pcr_precoders: basis dimension does not match N_t N_f");
        if (ports < 0 || ports > joint.vectors.cols())
            throw std::invalid_argument("pcr_precoders: port count " + std::to_string(ports) + " outside 0.." +
                                        std::to_string(joint.vectors.cols()));
        PortPrecoderSet out;
        out.scheme = Scheme::Pcr;
        out.antennas = antennas;
        out.subbands = subbands;
        out.joint = joint.vectors.leftCols(ports).conjugate();
        return out;
    }

    static void check_samples(const std::vector<WidebandChannel> &samples, Eigen::Index Nt, Eigen::Index Nf)
    {
        if (samples.empty())
            throw std::invalid_argument("port selection needs at least one uplink sample");
        for (const auto &s : samples)
            if (s.matrix.rows() != Nt || s.matrix.cols() != Nf)
                throw std::invalid_argument("uplink sample dimensions do not match the bases");
    }

    RMatrix eigen_domain_power(const EigenBasis &spatial, const EigenBasis &frequency,
                               const std::vector<WidebandChannel> &samples)
    {
        check_samples(samples, spatial.vectors.rows(), frequency.vectors.rows());
        const CMatrix Ufc = frequency.vectors.conjugate();
        RMatrix G = RMatrix::Zero(spatial.vectors.cols(), frequency.vectors.cols());
        for (const auto &s : samples)
            G += (spatial.vectors.adjoint() * s.matrix * Ufc).cwiseAbs2();
        return G;
    }

    PortPrecoderSet pcre_select(const EigenBasis &spatial, const EigenBasis &frequency,
                                const std::vector<WidebandChannel> &samples, int ports, Scheme tag)
    {
        const RMatrix G = eigen_domain_power(spatial, frequency, samples);
        PortPrecoderSet out;
        out.scheme = tag;
        out.antennas = (int)spatial.vectors.rows();
        out.subbands = (int)frequency.vectors.rows();
        out.positions = top_positions(G, ports);
        out.spatial.resize(out.antennas, ports);
        out.frequency.resize(out.subbands, ports);
        for (int n = 0; n < ports; ++n)
        {
            out.spatial.col(n) = spatial.vectors.col(out.positions[n].first).conjugate();
            out.frequency.col(n) = frequency.vectors.col(out.positions[n].second).conjugate();
        }
        return out;
    }

    RMatrix dft_domain_power(const CMatrix &S, const CMatrix &F, const std::vector<WidebandChannel> &samples)
    {
        check_samples(samples, S.rows(), F.rows());
        RMatrix G = RMatrix::Zero(S.cols(), F.cols());
        for (const auto &s : samples)
            G += (S.adjoint() * s.matrix * F).cwiseAbs2();
        return G;
    }

    PortPrecoderSet pcrd_select(const CMatrix &S, const CMatrix &F, const std::vector<WidebandChannel> &samples,
                                int ports)
    {
        const RMatrix G = dft_domain_power(S, F, samples);
        PortPrecoderSet out;
        out.scheme = Scheme::PcrD;
        out.antennas = (int)S.rows();
        out.subbands = (int)F.rows();
        out.positions = top_positions(G, ports);
        out.spatial.resize(out.antennas, ports);
        out.frequency.resize(out.subbands, ports);
        for (int n = 0; n < ports; ++n)
        {
            out.spatial.col(n) = S.col(out.positions[n].first).conjugate();
            out.frequency.col(n) = F.col(out.positions[n].second);
        }
        return out;
    }

    double MeasurementConfig::estimate_variance() const
    {
        if (noiseless())
            return 0.0;
        return 1.0 / (double(pilot_length) * std::pow(10.0, 0.1 * pilot_snr_db));
    }

    void MeasurementConfig::validate() const
    {
        if (pilot_length < 1)
            throw std::invalid_argument("measurement: pilot length must be >= 1");
        if (!std::isfinite(pilot_snr_db) && !noiseless())
            throw std::invalid_argument("measurement: pilot SNR must be finite");
    }

    CVector ue_measure(const CMatrix &H, const PortPrecoderSet &ports, const MeasurementConfig &cfg,
                       std::mt19937_64 &rng, OpCounter *counter)
    {
        if (H.rows() != ports.antennas || H.cols() != ports.subbands)
            throw std::invalid_argument("ue_measure: channel is " + std::to_string(H.rows()) + " x " +
                                        std::to_string(H.cols()) + ", precoders expect " +
                                        std::to_string(ports.antennas) + " x " + std::to_string(ports.subbands));
        const double var = cfg.estimate_variance();
        std::normal_distribution<double> N01(0.0, std::sqrt(0.5 * var));
        const int Na = ports.port_count();
        CVector g = CVector::Zero(Na);
        for (int n = 0; n < Na; ++n)
            for (int k = 0; k < ports.subbands; ++k)
            {
                cdouble y = ports.subband_precoder(n, k).transpose() * H.col(k);
                if (var > 0.0)
                {
                    const double re = N01(rng), im = N01(rng);
                    y += cdouble(re, im);
                }
                g[n] += y;
                if (counter)
                {
                    counter->port_subband_pairs += 1;
                    counter->pilot_correlations += cfg.pilot_length;
                }
            }
        return g;
    }

    CMatrix ue_channel_estimate(const CMatrix &H, const MeasurementConfig &cfg, std::mt19937_64 &rng)
    {
        const double var = cfg.estimate_variance();
        if (var == 0.0)
            return H;
        std::normal_distribution<double> N01(0.0, std::sqrt(0.5 * var));
        CMatrix out = H;
        for (Eigen::Index i = 0; i < out.size(); ++i)
        {
            const double re = N01(rng), im = N01(rng);
            out(i) += cdouble(re, im);
        }
        return out;
    }

    CMatrix reconstruct(const CVector &coefficients, const PortPrecoderSet &ports)
    {
        if (coefficients.size() != ports.port_count())
            throw std::invalid_argument("reconstruct: " + std::to_string(coefficients.size()) + " coefficients for " +
                                        std::to_string(ports.port_count()) + " ports");
        if (!ports.factored())
        {
            const CVector h = ports.joint.conjugate() * coefficients;
            return unvectorize(h, ports.antennas, ports.subbands);
        }
        return ports.spatial.conjugate() * coefficients.asDiagonal() * ports.frequency.adjoint();
    }

    double nmse(const CMatrix &H, const CMatrix &H_hat)
    {
        if (H.rows() != H_hat.rows() || H.cols() != H_hat.cols())
            throw std::invalid_argument("nmse: dimension mismatch");
        const double den = H.squaredNorm();
        if (!(den > 0.0))
            throw std::invalid_argument("nmse: reference channel is zero");
        return (H - H_hat).squaredNorm() / den;
    }
}
