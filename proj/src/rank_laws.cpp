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

#include "fddcsi/rank_laws.hpp"
#include "fddcsi/covariance.hpp"
#include "fddcsi/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fddcsi
{
    static constexpr int theta_order = 48;
    static constexpr int s_order = 24;

    static double merged_length(std::vector<std::pair<double, double>> &iv)
    {
        if (iv.empty())
            return 0.0;
        std::sort(iv.begin(), iv.end());
        double total = 0.0, lo = iv[0].first, hi = iv[0].second;
        for (size_t i = 1; i < iv.size(); ++i)
        {
            if (iv[i].first > hi)
            {
                total += hi - lo;
                lo = iv[i].first;
            }
            hi = std::max(hi, iv[i].second);
        }
        return total + hi - lo;
    }

    // Image of [a, b] under sin
    static std::pair<double, double> sin_image(double a, double b)
    {
        if (b - a >= 2.0 * pi)
            return {-1.0, 1.0};
        double lo = std::min(std::sin(a), std::sin(b)), hi = std::max(std::sin(a), std::sin(b));
        auto hits = [&](double x)
        { return std::floor((b - x) / (2.0 * pi)) >= std::ceil((a - x) / (2.0 * pi)); };
        if (hits(pi / 2))
            hi = 1.0;
        if (hits(-pi / 2))
            lo = -1.0;
        return {lo, hi};
    }

    // Region breakpoints plus the zeniths where an azimuth bound crosses pi/2 + k pi
    static std::vector<double> theta_breakpoints(const std::vector<const AngularRegion *> &regions)
    {
        std::vector<double> b;
        for (const AngularRegion *r : regions)
        {
            for (double t : r->breakpoints())
                b.push_back(t);
            for (const PiecewiseLinear *f : {&r->phi_min, &r->phi_max})
                for (size_t i = 0; i + 1 < f->knots.size(); ++i)
                {
                    const double x0 = f->knots[i], x1 = f->knots[i + 1], y0 = f->values[i], y1 = f->values[i + 1];
                    if (y0 == y1)
                        continue;
                    const double lo = std::min(y0, y1), hi = std::max(y0, y1);
                    for (int k = (int)std::ceil((lo - pi / 2) / pi); pi / 2 + k * pi <= hi; ++k)
                    {
                        const double t = x0 + (pi / 2 + k * pi - y0) / (y1 - y0) * (x1 - x0);
                        if (t > r->theta_min && t < r->theta_max)
                            b.push_back(t);
                    }
                }
        }
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
    }

    double rho_spatial(const AngularSupport &support, const UpaConfig &upa, double wavelength)
    {
        support.validate();
        std::vector<const AngularRegion *> regions;
        for (const auto &r : support.regions)
            regions.push_back(&r);
        const auto b = theta_breakpoints(regions);

        double integral = 0.0;
        std::vector<std::pair<double, double>> iv;
        for (size_t i = 0; i + 1 < b.size(); ++i)
            for (auto [t, w] : gauss_legendre(b[i], b[i + 1], theta_order))
            {
                iv.clear();
                for (const AngularRegion *r : regions)
                    if (t >= r->theta_min && t <= r->theta_max)
                        iv.push_back(sin_image(r->phi_min(t), r->phi_max(t)));
                const double st = std::sin(t);
                integral += w * st * st * merged_length(iv);
            }
        const double rho = upa.spacing_h * upa.spacing_v / (wavelength * wavelength) * integral;
        return std::clamp(rho, 0.0, 1.0);
    }

    double rho_spatial_box(double theta_min, double theta_max, double phi_min, double phi_max, const UpaConfig &upa,
                           double wavelength)
    {
        if (!(theta_min >= 0.0 && theta_max <= pi && theta_min < theta_max))
            throw std::invalid_argument("rho_spatial_box: need 0 <= theta_min < theta_max <= pi");
        if (!(phi_min >= -pi / 2 && phi_max <= pi / 2 && phi_min < phi_max))
            throw std::invalid_argument("rho_spatial_box: need -pi/2 <= phi_min < phi_max <= pi/2");
        const double az = std::sin(phi_max) - std::sin(phi_min);
        const double el = 0.5 * (theta_max - theta_min) - 0.25 * (std::sin(2.0 * theta_max) - std::sin(2.0 * theta_min));
        return std::clamp(upa.spacing_h * upa.spacing_v / (wavelength * wavelength) * az * el, 0.0, 1.0);
    }

    double rank_spatial_fullrange(const UpaConfig &upa, double wavelength)
    {
        const double lh = upa.cols * upa.spacing_h / wavelength, lv = upa.rows * upa.spacing_v / wavelength;
        return pi * lh * lv;
    }

    double rho_frequency(const std::vector<std::pair<double, double>> &delay_intervals, double subband_spacing)
    {
        if (!(subband_spacing > 0.0))
            throw std::invalid_argument("rho_frequency: subband spacing must be positive");
        auto iv = delay_intervals;
        std::sort(iv.begin(), iv.end());
        double total = 0.0;
        for (size_t i = 0; i < iv.size(); ++i)
        {
            if (!std::isfinite(iv[i].first) || !std::isfinite(iv[i].second) || iv[i].first < 0.0 ||
                iv[i].second < iv[i].first)
                throw std::invalid_argument("rho_frequency: need 0 <= tau_min <= tau_max");
            if (i > 0 && iv[i].first < iv[i - 1].second)
                throw std::invalid_argument("rho_frequency: delay intervals overlap");
            total += iv[i].second - iv[i].first;
        }
        return std::min(1.0, total * subband_spacing);
    }

    double rho_joint(const AngularDelaySupport &support, const UpaConfig &upa, const CarrierConfig &carrier,
                     LinkEnd link)
    {
        support.validate();
        std::vector<const AngularRegion *> angular;
        for (const auto &r : support.regions)
            angular.push_back(&r.angles);
        const auto b = theta_breakpoints(angular);

        double integral = 0.0;
        std::vector<double> sb;
        std::vector<std::pair<double, double>> iv;
        for (size_t i = 0; i + 1 < b.size(); ++i)
            for (auto [t, wt] : gauss_legendre(b[i], b[i + 1], theta_order))
            {
                sb.assign({-1.0, 1.0});
                for (const auto &r : support.regions)
                    if (t >= r.angles.theta_min && t <= r.angles.theta_max)
                    {
                        sb.push_back(std::sin(r.angles.phi_min(t)));
                        sb.push_back(std::sin(r.angles.phi_max(t)));
                    }
                std::sort(sb.begin(), sb.end());
                sb.erase(std::unique(sb.begin(), sb.end()), sb.end());

                double inner = 0.0;
                for (size_t j = 0; j + 1 < sb.size(); ++j)
                {
                    if (sb[j + 1] - sb[j] < 1e-15)
                        continue;
                    for (auto [s, ws] : gauss_legendre(sb[j], sb[j + 1], s_order))
                    {
                        iv.clear();
                        const double front = std::asin(s), back = pi - front;
                        for (const auto &r : support.regions)
                        {
                            if (t < r.angles.theta_min || t > r.angles.theta_max)
                                continue;
                            for (double phi : {front, back})
                                for (int k = -2; k <= 2; ++k)
                                {
                                    const double p = phi + 2.0 * pi * k;
                                    if (p >= r.angles.phi_min(t) && p <= r.angles.phi_max(t))
                                    {
                                        iv.emplace_back(r.tau_min(t, p), r.tau_max(t, p));
                                        break;
                                    }
                                }
                        }
                        inner += ws * merged_length(iv);
                    }
                }
                const double st = std::sin(t);
                integral += wt * st * st * inner;
            }
        const double lambda = carrier.wavelength(link);
        const double rho = upa.spacing_h * upa.spacing_v * carrier.subband_spacing() / (lambda * lambda) * integral;
        return std::clamp(rho, 0.0, 1.0);
    }

    int feedback_bound(const AngularDelaySupport &support, const UpaConfig &upa, const CarrierConfig &carrier,
                       LinkEnd link)
    {
        const double r = rho_joint(support, upa, carrier, link);
        const double n = r * upa.elements_per_polarization() * carrier.subband_count;
        return int(std::ceil(n - 1e-9)) * upa.polarizations;
    }

    std::vector<RankConvergenceRow> rank_convergence(const AngularSupport &support, double spacing_h_wl,
                                                     double spacing_v_wl, const std::vector<int> &sizes, double gamma,
                                                     int quadrature_order)
    {
        std::vector<RankConvergenceRow> rows;
        for (int n : sizes)
        {
            const auto t0 = std::chrono::steady_clock::now();
            UpaConfig upa;
            upa.rows = upa.cols = n;
            upa.spacing_h = spacing_h_wl;
            upa.spacing_v = spacing_v_wl;
            RankConvergenceRow row;
            row.size = n;
            row.quadrature_order = spatial_quadrature_order(support, upa, 1.0, quadrature_order);
            row.rho = rho_spatial(support, upa, 1.0);
            const CMatrix R = analytic_spatial_covariance(support, upa, 1.0, quadrature_order);
            row.effective_rank = effective_rank(hermitian_eigenvalues(R), gamma);
            row.ratio = double(row.effective_rank) / double(n * n);
            row.relative_gap = std::abs(row.ratio - row.rho) / row.rho;
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            rows.push_back(row);
        }
        return rows;
    }
}
