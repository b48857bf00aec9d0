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

#include "helpers.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace fddcsi;
using Catch::Approx;

namespace
{
    // Phase of a plane wave at an element in the y-z plane, direction from spherical angles
    cdouble element_phase(double theta, double phi, double y, double z, double wavelength)
    {
        const double dy = std::sin(theta) * std::sin(phi), dz = std::cos(theta);
        return std::polar(1.0, 2.0 * pi / wavelength * (y * dy + z * dz));
    }

    double max_abs(const CMatrix &M)
    {
        return M.size() ? M.cwiseAbs().maxCoeff() : 0.0;
    }
}

TEST_CASE("horizontal steering at broadside end-fire alternates sign", "[array_geometry]")
{
    const UpaConfig u = test::upa(1, 4, 1, 0.5, 0.5);
    const CVector a = steering_h(pi / 2, pi / 2, u, 1.0);
    const double expected[] = {1, -1, 1, -1};
    for (int n = 0; n < 4; ++n)
        CHECK(std::abs(a[n] - expected[n]) < 1e-12);
}

TEST_CASE("vertical steering at zenith alternates sign", "[array_geometry]")
{
    const UpaConfig u = test::upa(3, 1, 1, 0.5, 0.5);
    const CVector a = steering_v(0.0, u, 1.0);
    const double expected[] = {1, -1, 1};
    for (int n = 0; n < 3; ++n)
        CHECK(std::abs(a[n] - expected[n]) < 1e-12);
}

TEST_CASE("steering vectors match element positions", "[array_geometry]")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> T(0.0, pi), P(-pi, pi), D(0.2, 1.2);
    for (int trial = 0; trial < 50; ++trial)
    {
        const int Nh = 1 + trial % 4, Nv = 1 + (trial / 4) % 4;
        const double lambda = 0.0857;
        const UpaConfig u = test::upa(Nv, Nh, 1, D(rng), D(rng), lambda);
        const double theta = T(rng), phi = P(rng);
        const CVector a = steering_3d(theta, phi, u, lambda);
        REQUIRE(a.size() == Nh * Nv);
        for (int h = 0; h < Nh; ++h)
            for (int v = 0; v < Nv; ++v)
            {
                const cdouble ref = element_phase(theta, phi, h * u.spacing_h, v * u.spacing_v, lambda);
                CHECK(std::abs(a[h * Nv + v] - ref) < 1e-12);
            }
        CHECK((a.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("steering rejects non-finite angles", "[array_geometry]")
{
    const UpaConfig u = test::upa(2, 2, 1, 0.5, 0.5);
    CHECK_THROWS(steering_h(std::nan(""), 0.0, u, 1.0));
    CHECK_THROWS(steering_3d(0.5, INFINITY, u, 1.0));
    CHECK_THROWS(steering_v(-INFINITY, u, 1.0));
}

TEST_CASE("delay response at half the inverse spacing flips sign per subband", "[array_geometry]")
{
    const CarrierConfig c = test::carrier(6);
    const double tau = 1.0 / (2.0 * c.subband_spacing());
    const CVector b = delay_response(tau, c, LinkEnd::Downlink);
    for (int k = 0; k + 1 < 6; ++k)
        CHECK(std::abs(b[k + 1] / b[k] - cdouble(-1.0)) < 1e-9);
    CHECK((b.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("delay response follows the absolute subband grid", "[array_geometry]")
{
    const CarrierConfig c = test::carrier(5);
    const RVector f = c.subband_frequencies(LinkEnd::Uplink);
    CHECK(f[2] == Approx(c.ul_center_frequency).epsilon(1e-15));
    CHECK(f[1] - f[0] == Approx(c.subband_spacing()));
    const double tau = 123.4e-9;
    const CVector b = delay_response(tau, c, LinkEnd::Uplink);
    for (int k = 0; k < 5; ++k)
    {
        const double ph = std::fmod(2.0 * pi * f[k] * tau, 2.0 * pi);
        CHECK(std::abs(b[k] - std::polar(1.0, -ph)) < 1e-9);
    }
    CHECK_THROWS(delay_response(-1e-9, c, LinkEnd::Uplink));
    CHECK_THROWS(delay_response(std::nan(""), c, LinkEnd::Uplink));
}

TEST_CASE("two-point DFT", "[array_geometry]")
{
    const CMatrix E = dft_basis(2);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(E(0, 0) - s) < 1e-15);
    CHECK(std::abs(E(0, 1) - s) < 1e-15);
    CHECK(std::abs(E(1, 0) - s) < 1e-15);
    CHECK(std::abs(E(1, 1) + s) < 1e-15);
    CHECK_THROWS(dft_basis(0));
}

TEST_CASE("DFT bases are unitary", "[array_geometry]")
{
    for (int K = 1; K <= 64; ++K)
    {
        const CMatrix E = dft_basis(K);
        CHECK(max_abs(E.adjoint() * E - CMatrix::Identity(K, K)) < 1e-10);
    }
    const UpaConfig u = test::upa(2, 4, 2, 0.5, 0.5);
    const CMatrix S = spatial_dft_basis(u);
    REQUIRE(S.rows() == 16);
    CHECK(max_abs(S.adjoint() * S - CMatrix::Identity(16, 16)) < 1e-10);
    // Cross-polarization blocks are zero
    CHECK(max_abs(S.block(0, 8, 8, 8)) == 0.0);
    const CMatrix F = frequency_dft_basis(test::carrier(16));
    CHECK(max_abs(F.adjoint() * F - CMatrix::Identity(16, 16)) < 1e-10);
}

TEST_CASE("spatial DFT basis is a Kronecker product of 1-D bases", "[array_geometry]")
{
    const UpaConfig u = test::upa(3, 4, 1, 0.5, 0.5);
    const CMatrix S = spatial_dft_basis(u);
    const CMatrix Eh = dft_basis(4), Ev = dft_basis(3);
    for (int h1 = 0; h1 < 4; ++h1)
        for (int v1 = 0; v1 < 3; ++v1)
            for (int h2 = 0; h2 < 4; ++h2)
                for (int v2 = 0; v2 < 3; ++v2)
                    CHECK(std::abs(S(h1 * 3 + v1, h2 * 3 + v2) - Eh(h1, h2) * Ev(v1, v2)) < 1e-14);
}

TEST_CASE("broadside steering projects onto a single DFT column", "[array_geometry]")
{
    const UpaConfig u = test::upa(4, 8, 1, 0.5, 0.5);
    const CVector a = steering_3d(pi / 2, 0.0, u, 1.0);
    const CVector c = spatial_dft_basis(u).adjoint() * a;
    Eigen::Index imax;
    c.cwiseAbs().maxCoeff(&imax);
    CHECK(std::abs(c[imax]) == Approx(std::sqrt(32.0)));
    CHECK(c.squaredNorm() - std::norm(c[imax]) < 1e-18);
}

TEST_CASE("configuration validation", "[array_geometry]")
{
    UpaConfig u = test::upa(2, 2, 1, 0.5, 0.5);
    CHECK_NOTHROW(u.validate());
    u.rows = 0;
    CHECK_THROWS(u.validate());
    u = test::upa(2, 2, 3, 0.5, 0.5);
    CHECK_THROWS(u.validate());
    u = test::upa(2, 2, 1, 0.0, 0.5);
    CHECK_THROWS(u.validate());

    CarrierConfig c;
    CHECK_NOTHROW(c.validate());
    c.subband_count = 0;
    CHECK_THROWS(c.validate());
    c = CarrierConfig{};
    c.subcarrier_spacing = -1.0;
    CHECK_THROWS(c.validate());
    CHECK(CarrierConfig{}.subband_spacing() == Approx(30e3 * 48));
}

TEST_CASE("element field patterns", "[array_geometry]")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> T(0.0, pi), P(-pi, pi);
    for (int i = 0; i < 20; ++i)
    {
        const auto f = element_field(FieldPattern::Isotropic, T(rng), P(rng), P(rng));
        CHECK(f.theta * f.theta + f.phi * f.phi == Approx(1.0));
    }
    const auto bore = element_field(FieldPattern::ThreeGpp, pi / 2, 0.0, 0.0);
    CHECK(bore.theta * bore.theta == Approx(std::pow(10.0, 0.8)));
    CHECK(bore.phi == Approx(0.0).margin(1e-15));
    const auto back = element_field(FieldPattern::ThreeGpp, pi / 2, pi, pi / 2);
    CHECK(back.theta * back.theta + back.phi * back.phi == Approx(std::pow(10.0, -2.2)));
    CHECK(parse_field_pattern("3gpp") == FieldPattern::ThreeGpp);
    CHECK_THROWS(parse_field_pattern("dipole"));
}
