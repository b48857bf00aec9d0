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

#include "fddcsi/link_sim.hpp"
#include "fddcsi/parallel.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace fddcsi
{
    void ScenarioConfig::validate() const
    {
        bs.validate();
        carrier.validate();
        ue.validate();
        measurement.validate();
        quantizer.validate();
        if (ue_count < 1)
            throw std::invalid_argument("scenario: ue_count must be >= 1");
        if (models.empty())
            throw std::invalid_argument("scenario: at least one channel model is required");
        if (!(delay_spread >= 0.0))
            throw std::invalid_argument("scenario: delay spread must be non-negative");
        if (!(sector_half_width >= 0.0 && sector_half_width <= pi))
            throw std::invalid_argument("scenario: sector half width must be in [0, 180] degrees");
        if (streams_per_ue < 1 || streams_per_ue > ue.antenna_count())
            throw std::invalid_argument("scenario: streams per UE must be in 1..N_r");
        if (ue_count * streams_per_ue > bs.total_antennas())
            throw std::invalid_argument("scenario: more streams than BS antennas");
        if (ul_samples < 1)
            throw std::invalid_argument("scenario: ul_samples must be >= 1");
        if (!(total_power > 0.0))
            throw std::invalid_argument("scenario: total power must be positive");
    }

    ScenarioConfig default_scenario()
    {
        ScenarioConfig s;
        const double lambda = s.carrier.wavelength(LinkEnd::Downlink);
        s.bs.rows = 2;
        s.bs.cols = 8;
        s.bs.polarizations = 2;
        s.bs.spacing_h = 0.5 * lambda;
        s.bs.spacing_v = 0.8 * lambda;
        s.bs.slant_angles = {deg2rad(45.0), deg2rad(-45.0)};
        s.bs.element_pattern = FieldPattern::ThreeGpp;
        s.ue.slant_angles = {0.0, pi / 2};
        return s;
    }

    std::vector<PathSet> build_scenario(const ScenarioConfig &cfg, uint64_t drop_seed)
    {
        std::vector<PathSet> out;
        for (int u = 0; u < cfg.ue_count; ++u)
        {
            const std::string &model = cfg.models[u % cfg.models.size()];
            PathSet ps = generate_cdl_paths(model, cfg.delay_spread, derive_seed(drop_seed, {uint64_t(u), 1}));
            std::mt19937_64 rng(derive_seed(drop_seed, {uint64_t(u), 2}));
            std::uniform_real_distribution<double> U(-cfg.sector_half_width, cfg.sector_half_width);
            translate_angles(ps, U(rng));
            out.push_back(std::move(ps));
        }
        return out;
    }

    CMatrix ezf_precoder(const std::vector<CMatrix> &ue_channels, int streams, double total_power)
    {
        if (ue_channels.empty())
            throw std::invalid_argument("ezf_precoder: no UEs");
        const Eigen::Index Nt = ue_channels[0].cols();
        const int U = (int)ue_channels.size(), Ns = U * streams;
        if (Ns > Nt)
            throw std::invalid_argument("ezf_precoder: more streams than transmit antennas");
        CMatrix E(Ns, Nt);
        for (int u = 0; u < U; ++u)
        {
            const CMatrix &G = ue_channels[u];
            if (G.cols() != Nt || G.rows() < streams)
                throw std::invalid_argument("ezf_precoder: inconsistent UE channel dimensions");
            Eigen::JacobiSVD<CMatrix> svd(G, Eigen::ComputeThinV);
            for (int s = 0; s < streams; ++s)
                E.row(u * streams + s) = svd.matrixV().col(s).adjoint();
        }
        CMatrix gram = E * E.adjoint();
        const RVector ev = hermitian_eigenvalues(gram);
        const double top = ev.maxCoeff(), bottom = std::max(ev.minCoeff(), 0.0);
        if (!(bottom * 1e8 >= top))
            gram += (1e-8 * top) * CMatrix::Identity(Ns, Ns);
        CMatrix W = E.adjoint() * gram.ldlt().solve(CMatrix::Identity(Ns, Ns));
        const double per_stream = std::sqrt(total_power / Ns);
        for (int i = 0; i < Ns; ++i)
        {
            const double n = W.col(i).norm();
            if (n > 0.0)
                W.col(i) *= per_stream / n;
        }
        return W;
    }

    std::vector<double> mmse_irc_sinr(const std::vector<CMatrix> &ue_channels, const CMatrix &W, int streams,
                                      double noise_power)
    {
        if (!(noise_power > 0.0))
            throw std::invalid_argument("mmse_irc_sinr: noise power must be positive");
        const int U = (int)ue_channels.size();
        if (W.cols() != U * streams)
            throw std::invalid_argument("mmse_irc_sinr: precoder has the wrong number of streams");
        std::vector<double> sinr;
        for (int u = 0; u < U; ++u)
        {
            const CMatrix GW = ue_channels[u] * W;
            const Eigen::Index Nr = GW.rows();
            const CMatrix total = GW * GW.adjoint() + noise_power * CMatrix::Identity(Nr, Nr);
            for (int s = 0; s < streams; ++s)
            {
                const CVector d = GW.col(u * streams + s);
                const CMatrix Q = total - d * d.adjoint();
                const CVector x = Q.ldlt().solve(d);
                sinr.push_back(std::max(0.0, d.dot(x).real()));
            }
        }
        return sinr;
    }

    double spectral_efficiency(const std::vector<double> &sinr)
    {
        double se = 0.0;
        for (double x : sinr)
        {
            if (!(x >= 0.0))
                throw std::invalid_argument("spectral_efficiency: SINR must be non-negative");
            se += std::log2(1.0 + x);
        }
        return se;
    }

    void EvaluationConfig::validate() const
    {
        scenario.validate();
        if (schemes.empty())
            throw std::invalid_argument("evaluation: no schemes");
        if (ports.empty())
            throw std::invalid_argument("evaluation: no port counts");
        const int dim = scenario.bs.total_antennas() * scenario.carrier.subband_count;
        for (int a : ports)
            if (a < 1 || a > dim)
                throw std::invalid_argument("evaluation: port count " + std::to_string(a) + " outside 1.." +
                                            std::to_string(dim));
        if (drops < 1)
            throw std::invalid_argument("evaluation: drops must be >= 1");
        if (workers < 1)
            throw std::invalid_argument("evaluation: workers must be >= 1");
        for (double s : snr_db)
            if (!std::isfinite(s))
                throw std::invalid_argument("evaluation: SNR values must be finite");
    }

    static bool has(const std::vector<Scheme> &v, Scheme s)
    {
        return std::find(v.begin(), v.end(), s) != v.end();
    }

    static void add_noise(CMatrix &H, double var, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> N01(0.0, std::sqrt(0.5 * var));
        for (Eigen::Index i = 0; i < H.size(); ++i)
        {
            const double re = N01(rng), im = N01(rng);
            H(i) += cdouble(re, im);
        }
    }

    DropOutcome evaluate_drop(const EvaluationConfig &cfg, int drop, bool with_se)
    {
        const ScenarioConfig &sc = cfg.scenario;
        const uint64_t drop_seed = derive_seed(cfg.seed, {uint64_t(drop)});
        const std::vector<PathSet> paths = build_scenario(sc, drop_seed);
        const int U = sc.ue_count, R = sc.ue.antenna_count(), Nt = sc.bs.total_antennas(), Nf = sc.carrier.subband_count;
        const int NS = (int)cfg.schemes.size(), NA = (int)cfg.ports.size();
        const CMatrix S = spatial_dft_basis(sc.bs), F = frequency_dft_basis(sc.carrier);

        const bool need_pcr = has(cfg.schemes, Scheme::Pcr);
        const bool need_pcre = has(cfg.schemes, Scheme::PcrE);
        const bool need_ul_bases = has(cfg.schemes, Scheme::PcrEUplink);

        // truth[u][r], estimate[s][a][u][r]
        std::vector<std::vector<CMatrix>> truth(U);
        std::vector<std::vector<std::vector<std::vector<CMatrix>>>> estimate(
            NS, std::vector<std::vector<std::vector<CMatrix>>>(NA, std::vector<std::vector<CMatrix>>(U)));

        DropOutcome out;
        out.nmse.assign(NS, std::vector<double>(NA, 0.0));

        for (int u = 0; u < U; ++u)
        {
            const PathSet &ps = paths[u];
            for (const auto &ch : synthesize_all_antennas(ps, LinkEnd::Downlink, 0.0, sc.bs, sc.carrier, sc.ue))
                truth[u].push_back(ch.matrix);

            std::vector<WidebandChannel> ul;
            std::mt19937_64 ul_rng(derive_seed(drop_seed, {uint64_t(u), 3}));
            for (int c = 0; c < sc.ul_samples; ++c)
            {
                const PathSet redrawn = redraw_phases(ps, LinkEnd::Uplink, derive_seed(drop_seed, {uint64_t(u), 4, uint64_t(c)}));
                for (auto &ch : synthesize_all_antennas(redrawn, LinkEnd::Uplink, 0.0, sc.bs, sc.carrier, sc.ue))
                {
                    if (sc.ul_snr_db < 1e299)
                        add_noise(ch.matrix, ch.matrix.squaredNorm() / double(ch.matrix.size()) / std::pow(10.0, 0.1 * sc.ul_snr_db), ul_rng);
                    ul.push_back(std::move(ch));
                }
            }

            EigenBasis joint, spatial, frequency, spatial_ul, frequency_ul;
            if (need_pcr || need_pcre)
            {
                const CovarianceSet cov = expected_covariances(ps, LinkEnd::Downlink, sc.bs, sc.carrier, sc.ue, need_pcr);
                if (need_pcr)
                    joint = eigendecompose(cov.joint);
                if (need_pcre)
                {
                    spatial = eigendecompose(cov.spatial);
                    frequency = eigendecompose(cov.frequency);
                }
            }
            if (need_ul_bases)
            {
                const CovarianceSet cov = expected_covariances(ps, LinkEnd::Uplink, sc.bs, sc.carrier, sc.ue, false);
                spatial_ul = eigendecompose(cov.spatial);
                frequency_ul = eigendecompose(cov.frequency);
            }

            for (int s = 0; s < NS; ++s)
                for (int a = 0; a < NA; ++a)
                {
                    const int ports = cfg.ports[a];
                    std::mt19937_64 rng(derive_seed(drop_seed, {uint64_t(u), 5, uint64_t(s), uint64_t(a)}));
                    auto &est = estimate[s][a][u];
                    const Scheme scheme = cfg.schemes[s];
                    if (scheme == Scheme::Perfect)
                        est = truth[u];
                    else if (scheme == Scheme::Baseline)
                    {
                        std::vector<CMatrix> measured;
                        for (const auto &H : truth[u])
                            measured.push_back(ue_channel_estimate(H, sc.measurement, rng));
                        const FeedbackReport rep = baseline_report(measured, S, F, ports, sc.quantizer);
                        for (int r = 0; r < R; ++r)
                            est.push_back(baseline_reconstruct(rep, r, S, F));
                    }
                    else
                    {
                        PortPrecoderSet pre;
                        if (scheme == Scheme::Pcr)
                            pre = pcr_precoders(joint, ports, Nt, Nf);
                        else if (scheme == Scheme::PcrE)
                            pre = pcre_select(spatial, frequency, ul, ports);
                        else if (scheme == Scheme::PcrEUplink)
                            pre = pcre_select(spatial_ul, frequency_ul, ul, ports, Scheme::PcrEUplink);
                        else
                            pre = pcrd_select(S, F, ul, ports);
                        std::vector<CVector> g;
                        for (const auto &H : truth[u])
                            g.push_back(ue_measure(H, pre, sc.measurement, rng));
                        const FeedbackReport rep = make_report(scheme, g, sc.quantizer);
                        for (int r = 0; r < R; ++r)
                            est.push_back(reconstruct(rep.coefficients(r), pre));
                    }
                    for (int r = 0; r < R; ++r)
                        out.nmse[s][a] += nmse(truth[u][r], est[r]) / double(U * R);
                }
        }

        if (!with_se)
            return out;

        double gain = 0.0;
        for (const auto &hs : truth)
            for (const auto &H : hs)
                gain += H.squaredNorm() / double(H.size());
        gain /= double(U * R);

        const int NQ = (int)cfg.snr_db.size();
        out.se.assign(NS, std::vector<std::vector<double>>(NA, std::vector<double>(NQ, 0.0)));
        std::vector<CMatrix> g_true(U), g_est(U);
        for (int k = 0; k < Nf; ++k)
        {
            for (int u = 0; u < U; ++u)
            {
                g_true[u].resize(R, Nt);
                for (int r = 0; r < R; ++r)
                    g_true[u].row(r) = truth[u][r].col(k).transpose();
            }
            for (int s = 0; s < NS; ++s)
                for (int a = 0; a < NA; ++a)
                {
                    for (int u = 0; u < U; ++u)
                    {
                        g_est[u].resize(R, Nt);
                        for (int r = 0; r < R; ++r)
                            g_est[u].row(r) = estimate[s][a][u][r].col(k).transpose();
                    }
                    const CMatrix W = ezf_precoder(g_est, sc.streams_per_ue, sc.total_power);
                    for (int q = 0; q < NQ; ++q)
                    {
                        const double noise = sc.total_power * gain / std::pow(10.0, 0.1 * cfg.snr_db[q]);
                        out.se[s][a][q] += spectral_efficiency(mmse_irc_sinr(g_true, W, sc.streams_per_ue, noise)) / Nf;
                    }
                }
        }
        return out;
    }

    std::vector<DropOutcome> run_drops(const EvaluationConfig &cfg, bool with_se, const ProgressFn &progress)
    {
        cfg.validate();
        std::vector<DropOutcome> out(cfg.drops);
        std::mutex mtx;
        int done = 0;
        parallel_for(cfg.drops, cfg.workers, [&](int d)
                     {
            out[d] = evaluate_drop(cfg, d, with_se);
            if (progress)
            {
                std::lock_guard<std::mutex> lock(mtx);
                progress(++done, cfg.drops);
            } });
        return out;
    }

    static void mean_stderr(const std::vector<double> &x, double &mean, double &se)
    {
        const double n = double(x.size());
        mean = 0.0;
        for (double v : x)
            mean += v;
        mean /= n;
        double ss = 0.0;
        for (double v : x)
            ss += (v - mean) * (v - mean);
        se = x.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    }

    std::vector<SweepResult> summarize(const EvaluationConfig &cfg, const std::vector<DropOutcome> &drops, bool with_se)
    {
        const auto &sc = cfg.scenario;
        std::vector<SweepResult> rows;
        const int NQ = with_se ? (int)cfg.snr_db.size() : 1;
        std::vector<double> x;
        for (int q = 0; q < NQ; ++q)
            for (size_t s = 0; s < cfg.schemes.size(); ++s)
                for (size_t a = 0; a < cfg.ports.size(); ++a)
                {
                    SweepResult r;
                    r.snr_db = with_se ? cfg.snr_db[q] : 0.0;
                    r.scheme = to_string(cfg.schemes[s]);
                    r.ports = cfg.ports[a];
                    r.feedback_bits = feedback_bits(cfg.schemes[s], r.ports, sc.ue.antenna_count(), sc.bs.total_antennas(),
                                                    sc.carrier.subband_count, sc.quantizer);
                    r.drops = (int)drops.size();
                    x.clear();
                    for (const auto &d : drops)
                        x.push_back(d.nmse[s][a]);
                    mean_stderr(x, r.mean_nmse, r.nmse_stderr);
                    if (with_se)
                    {
                        x.clear();
                        for (const auto &d : drops)
                            x.push_back(d.se[s][a][q]);
                        mean_stderr(x, r.mean_se, r.se_stderr);
                    }
                    rows.push_back(r);
                }
        return rows;
    }

    std::vector<SweepResult> run_sweep(const EvaluationConfig &cfg, const ProgressFn &progress)
    {
        if (cfg.snr_db.empty())
            throw std::invalid_argument("sweep: at least one SNR value is required");
        return summarize(cfg, run_drops(cfg, true, progress), true);
    }

    std::vector<SweepResult> run_codebook_eval(const EvaluationConfig &cfg, const ProgressFn &progress)
    {
        return summarize(cfg, run_drops(cfg, false, progress), false);
    }
}
