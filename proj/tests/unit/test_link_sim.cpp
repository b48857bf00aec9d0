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
#include "helpers.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace fddcsi;
using Catch::Approx;

namespace
{
    EvaluationConfig small_config()
    {
        EvaluationConfig cfg;
        cfg.scenario = default_scenario();
        cfg.scenario.ue_count = 2;
        cfg.scenario.ul_samples = 3;
        cfg.ports = {8};
        cfg.drops = 3;
        return cfg;
    }

    CVector dominant_right(const CMatrix &G)
    {
        Eigen::JacobiSVD<CMatrix> svd(G, Eigen::ComputeThinV);
        return svd.matrixV().col(0);
    }
}

TEST_CASE("scenario drops are independent per UE and reproducible", "[link_level_sim]")
{
    const ScenarioConfig sc = default_scenario();
    const auto a = build_scenario(sc, 42), b = build_scenario(sc, 42), c = build_scenario(sc, 43);
    REQUIRE(a.size() == 8);
    for (const auto &ps : a)
        CHECK(ps.size() == 460);
    for (size_t u = 0; u < a.size(); ++u)
        for (size_t m = 0; m < a[u].size(); m += 37)
        {
            CHECK(a[u].paths[m].aod == b[u].paths[m].aod);
            CHECK(a[u].paths[m].dl.theta_phi == b[u].paths[m].dl.theta_phi);
        }
    for (size_t u = 1; u < a.size(); ++u)
        CHECK(a[u].paths[0].aod != a[0].paths[0].aod);
    CHECK(c[0].paths[0].aod != a[0].paths[0].aod);
}

TEST_CASE("scenario validation", "[link_level_sim]")
{
    ScenarioConfig sc = default_scenario();
    CHECK_NOTHROW(sc.validate());
    sc.ue_count = 0;
    CHECK_THROWS(sc.validate());
    sc = default_scenario();
    sc.streams_per_ue = 3;
    CHECK_THROWS(sc.validate());
    sc = default_scenario();
    sc.ue_count = 17;
    sc.streams_per_ue = 2;
    CHECK_THROWS(sc.validate());
    sc = default_scenario();
    sc.models = {};
    CHECK_THROWS(sc.validate());
}

TEST_CASE("single-user EZF is the dominant eigenbeam", "[link_level_sim]")
{
    std::mt19937_64 rng(1);
    const CMatrix G = test::random_cmatrix(2, 8, rng);
    const CMatrix W = ezf_precoder({G}, 1, 2.0);
    REQUIRE(W.cols() == 1);
    CHECK(W.col(0).norm() == Approx(std::sqrt(2.0)));
    CHECK(std::abs(dominant_right(G).dot(W.col(0))) == Approx(W.col(0).norm()));
}

TEST_CASE("EZF nulls inter-user interference with perfect CSI", "[link_level_sim]")
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial)
    {
        std::vector<CMatrix> Gs;
        for (int u = 0; u < 4; ++u)
            Gs.push_back(test::random_cmatrix(trial % 2 ? 1 : 2, 16, rng));
        const CMatrix W = ezf_precoder(Gs, 1, 3.0);
        CHECK(W.squaredNorm() == Approx(3.0).epsilon(1e-10));
        for (int i = 0; i < 4; ++i)
        {
            const CVector vi = dominant_right(Gs[i]);
            const double own = std::norm(vi.dot(W.col(i)));
            for (int j = 0; j < 4; ++j)
                if (j != i)
                {
                    const double leak = std::norm(dominant_right(Gs[j]).dot(W.col(i)));
                    CHECK(leak / own < 1e-18);
                }
        }
    }
    CHECK_THROWS(ezf_precoder({}, 1, 1.0));
    CHECK_THROWS(ezf_precoder({test::random_cmatrix(2, 2, rng), test::random_cmatrix(2, 2, rng),
                               test::random_cmatrix(2, 2, rng)},
                              1, 1.0));
}

TEST_CASE("EZF regularizes a rank-deficient stack", "[link_level_sim]")
{
    std::mt19937_64 rng(3);
    const CMatrix G = test::random_cmatrix(1, 8, rng);
    const CMatrix W = ezf_precoder({G, G}, 1, 1.0);
    CHECK(W.allFinite());
    CHECK(W.squaredNorm() == Approx(1.0));
}

TEST_CASE("MMSE-IRC SINR", "[link_level_sim]")
{
    std::mt19937_64 rng(4);
    const CMatrix h = test::random_cmatrix(1, 4, rng);
    const CMatrix w = test::random_cmatrix(4, 1, rng);
    const double s1 = mmse_irc_sinr({h}, w, 1, 0.3)[0];
    CHECK(s1 == Approx(std::norm((h * w)(0, 0)) / 0.3));
    CHECK(mmse_irc_sinr({h}, w, 1, 0.6)[0] == Approx(s1 / 2));
    CHECK_THROWS(mmse_irc_sinr({h}, w, 1, 0.0));
    CHECK_THROWS(mmse_irc_sinr({h, h}, w, 1, 1.0));

    // The interference-aware combiner beats maximum-ratio combining
    for (int trial = 0; trial < 50; ++trial)
    {
        std::vector<CMatrix> Gs{test::random_cmatrix(2, 4, rng), test::random_cmatrix(2, 4, rng),
                                test::random_cmatrix(2, 4, rng)};
        const CMatrix W = test::random_cmatrix(4, 3, rng);
        const double noise = 0.5;
        const auto irc = mmse_irc_sinr(Gs, W, 1, noise);
        for (int u = 0; u < 3; ++u)
        {
            const CMatrix GW = Gs[u] * W;
            const CVector d = GW.col(u);
            CMatrix Q = noise * CMatrix::Identity(2, 2);
            for (int j = 0; j < 3; ++j)
                if (j != u)
                    Q += GW.col(j) * GW.col(j).adjoint();
            const double mrc = std::pow(d.squaredNorm(), 2) / d.dot(Q * d).real();
            CHECK(irc[u] >= mrc * (1 - 1e-12));
            CHECK(irc[u] == Approx(d.dot(Q.ldlt().solve(d)).real()));
        }
    }
}

TEST_CASE("spectral efficiency", "[link_level_sim]")
{
    CHECK(spectral_efficiency({0.0, 0.0, 0.0}) == 0.0);
    CHECK(spectral_efficiency({1.0}) == Approx(1.0));
    CHECK(spectral_efficiency({3.0, 7.0}) == Approx(5.0));
    CHECK_THROWS(spectral_efficiency({-1.0}));
}

TEST_CASE("perfect CSI reaches full multiplexing gain", "[link_level_sim][slow]")
{
    EvaluationConfig cfg;
    cfg.scenario = default_scenario();
    cfg.schemes = {Scheme::Perfect};
    cfg.snr_db = {20.0, 30.0};
    cfg.drops = 3;
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 2);
    const double slope = rows[1].mean_se - rows[0].mean_se;
    CHECK(slope == Approx(8 * std::log2(10.0)).epsilon(0.05));
    CHECK(rows[0].feedback_bits == 0);
}

TEST_CASE("sweep rows cover every combination", "[link_level_sim]")
{
    EvaluationConfig cfg = small_config();
    cfg.schemes = {Scheme::Perfect, Scheme::Pcr, Scheme::PcrD};
    cfg.ports = {4, 8};
    cfg.snr_db = {0.0, 10.0, 20.0};
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 3 * 3 * 2);
    CHECK(rows[0].scheme == "perfect");
    CHECK(rows[0].snr_db == 0.0);
    CHECK(rows.back().snr_db == 20.0);
    for (const auto &r : rows)
    {
        CHECK(r.mean_se >= 0.0);
        CHECK(r.mean_nmse >= 0.0);
        CHECK(r.drops == 3);
    }
    // Perfect CSI has zero error; SE grows with SNR
    CHECK(rows[0].mean_nmse == 0.0);
    CHECK(rows[6].mean_se > rows[0].mean_se);
    CHECK(rows[12].mean_se > rows[6].mean_se);
}

TEST_CASE("results do not depend on the worker count", "[link_level_sim]")
{
    EvaluationConfig cfg = small_config();
    cfg.schemes = {Scheme::Perfect, Scheme::Pcr, Scheme::PcrE, Scheme::Baseline, Scheme::PcrD};
    cfg.drops = 4;
    cfg.workers = 1;
    const auto a = run_sweep(cfg);
    cfg.workers = 3;
    const auto b = run_sweep(cfg);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i)
    {
        CHECK(a[i].mean_nmse == b[i].mean_nmse);
        CHECK(a[i].mean_se == b[i].mean_se);
    }
}

TEST_CASE("noisy measurement, quantized feedback and two streams run end to end", "[link_level_sim]")
{
    EvaluationConfig cfg = small_config();
    cfg.scenario.streams_per_ue = 2;
    cfg.scenario.measurement.pilot_snr_db = 10.0;
    cfg.scenario.ul_snr_db = 15.0;
    cfg.scenario.quantizer.mode = QuantizerMode::AmplitudePhase;
    cfg.schemes = {Scheme::Pcr, Scheme::PcrEUplink, Scheme::Baseline};
    cfg.drops = 2;
    const auto rows = run_sweep(cfg);
    for (const auto &r : rows)
    {
        CHECK(std::isfinite(r.mean_se));
        CHECK(r.mean_nmse > 0.0);
        CHECK(r.mean_nmse < 2.0);
    }
    cfg.ports = {0};
    CHECK_THROWS(run_sweep(cfg));
}
