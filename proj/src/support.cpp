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

#include "fddcsi/support.hpp"
#include "fddcsi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fddcsi
{
    double wrap_angle(double x)
    {
        double y = std::fmod(x + pi, 2.0 * pi);
        if (y < 0.0)
            y += 2.0 * pi;
        return y - pi;
    }

    // --- PiecewiseLinear ---

    PiecewiseLinear PiecewiseLinear::constant(double v)
    {
        return PiecewiseLinear{{0.0}, {v}};
    }

    PiecewiseLinear PiecewiseLinear::linear(double x0, double y0, double x1, double y1)
    {
        return PiecewiseLinear{{x0, x1}, {y0, y1}};
    }

    double PiecewiseLinear::operator()(double x) const
    {
        if (values.size() == 1 || x <= knots.front())
            return values.front();
        if (x >= knots.back())
            return values.back();
        const auto it = std::upper_bound(knots.begin(), knots.end(), x);
        const size_t i = size_t(it - knots.begin()) - 1;
        const double t = (x - knots[i]) / (knots[i + 1] - knots[i]);
        return values[i] + t * (values[i + 1] - values[i]);
    }

    void PiecewiseLinear::validate(const char *name) const
    {
        if (values.empty() || knots.size() != values.size())
            throw std::invalid_argument(std::string(name) + ": knots and values must have equal, non-zero length");
        for (size_t i = 0; i < values.size(); ++i)
            if (!std::isfinite(values[i]) || !std::isfinite(knots[i]))
                throw std::invalid_argument(std::string(name) + ": non-finite entry");
        for (size_t i = 1; i < knots.size(); ++i)
            if (!(knots[i] > knots[i - 1]))
                throw std::invalid_argument(std::string(name) + ": knots must be strictly increasing");
    }

    // --- GridFunction ---

    GridFunction GridFunction::constant(double v)
    {
        GridFunction g;
        g.theta_knots = {0.0};
        g.phi_knots = {0.0};
        g.values = RMatrix::Constant(1, 1, v);
        return g;
    }

    static void locate(const std::vector<double> &k, double x, size_t &i, double &t)
    {
        if (k.size() == 1 || x <= k.front())
        {
            i = 0, t = 0.0;
            return;
        }
        if (x >= k.back())
        {
            i = k.size() - 2, t = 1.0;
            return;
        }
        i = size_t(std::upper_bound(k.begin(), k.end(), x) - k.begin()) - 1;
        t = (x - k[i]) / (k[i + 1] - k[i]);
    }

    double GridFunction::operator()(double theta, double phi) const
    {
        size_t i, j;
        double s, t;
        locate(theta_knots, theta, i, s);
        locate(phi_knots, phi, j, t);
        const size_t i1 = theta_knots.size() == 1 ? i : i + 1;
        const size_t j1 = phi_knots.size() == 1 ? j : j + 1;
        return (1 - s) * (1 - t) * values(i, j) + s * (1 - t) * values(i1, j) +
               (1 - s) * t * values(i, j1) + s * t * values(i1, j1);
    }

    void GridFunction::validate(const char *name) const
    {
        if (theta_knots.empty() || phi_knots.empty() || values.rows() != (Eigen::Index)theta_knots.size() ||
            values.cols() != (Eigen::Index)phi_knots.size())
            throw std::invalid_argument(std::string(name) + ": grid shape mismatch");
        if (!values.allFinite())
            throw std::invalid_argument(std::string(name) + ": non-finite entry");
        for (size_t i = 1; i < theta_knots.size(); ++i)
            if (!(theta_knots[i] > theta_knots[i - 1]))
                throw std::invalid_argument(std::string(name) + ": theta knots must be strictly increasing");
        for (size_t i = 1; i < phi_knots.size(); ++i)
            if (!(phi_knots[i] > phi_knots[i - 1]))
                throw std::invalid_argument(std::string(name) + ": phi knots must be strictly increasing");
    }

    // --- AngularRegion ---

    AngularRegion AngularRegion::box(double theta_min, double theta_max, double phi_min, double phi_max)
    {
        return AngularRegion{theta_min, theta_max, PiecewiseLinear::constant(phi_min), PiecewiseLinear::constant(phi_max)};
    }

    bool AngularRegion::contains(double theta, double phi) const
    {
        if (theta < theta_min || theta > theta_max)
            return false;
        const double lo = phi_min(theta), hi = phi_max(theta);
        for (int k = -2; k <= 2; ++k)
        {
            const double p = phi + 2.0 * pi * k;
            if (p >= lo && p <= hi)
                return true;
        }
        return false;
    }

    std::vector<double> AngularRegion::breakpoints() const
    {
        std::vector<double> b{theta_min, theta_max};
        for (double x : phi_min.knots)
            if (x > theta_min && x < theta_max && !phi_min.is_constant())
                b.push_back(x);
        for (double x : phi_max.knots)
            if (x > theta_min && x < theta_max && !phi_max.is_constant())
                b.push_back(x);
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
    }

    double AngularRegion::area() const
    {
        const auto b = breakpoints();
        double a = 0.0;
        for (size_t i = 0; i + 1 < b.size(); ++i)
            a += 0.5 * (b[i + 1] - b[i]) * ((phi_max(b[i]) - phi_min(b[i])) + (phi_max(b[i + 1]) - phi_min(b[i + 1])));
        return a;
    }

    void AngularRegion::validate() const
    {
        if (!std::isfinite(theta_min) || !std::isfinite(theta_max) || theta_min < 0.0 || theta_max > pi ||
            theta_max < theta_min)
            throw std::invalid_argument("angular region: need 0 <= theta_min <= theta_max <= pi");
        phi_min.validate("phi_min");
        phi_max.validate("phi_max");
        for (double t : breakpoints())
        {
            const double w = phi_max(t) - phi_min(t);
            if (w < 0.0)
                throw std::invalid_argument("angular region: phi_max < phi_min");
            if (w > 2.0 * pi + 1e-12)
                throw std::invalid_argument("angular region: azimuth width exceeds 2 pi");
        }
    }

    // --- AngularSupport ---

    AngularSupport AngularSupport::full_range()
    {
        return box(0.0, pi, -pi, pi);
    }

    AngularSupport AngularSupport::box(double theta_min, double theta_max, double phi_min, double phi_max)
    {
        return AngularSupport{{AngularRegion::box(theta_min, theta_max, phi_min, phi_max)}};
    }

    double AngularSupport::area() const
    {
        double a = 0.0;
        for (const auto &r : regions)
            a += r.area();
        return a;
    }

    static bool strictly_inside(const AngularRegion &r, double theta, double phi)
    {
        constexpr double eps = 1e-9;
        if (theta <= r.theta_min + eps || theta >= r.theta_max - eps)
            return false;
        const double lo = r.phi_min(theta), hi = r.phi_max(theta);
        for (int k = -2; k <= 2; ++k)
        {
            const double p = phi + 2.0 * pi * k;
            if (p > lo + eps && p < hi - eps)
                return true;
        }
        return false;
    }

    void AngularSupport::validate() const
    {
        if (regions.empty())
            throw std::invalid_argument("angular support: no regions");
        for (const auto &r : regions)
            r.validate();
        constexpr int n = 24;
        for (size_t a = 0; a < regions.size(); ++a)
            for (int i = 0; i < n; ++i)
            {
                const auto &r = regions[a];
                const double theta = r.theta_min + (i + 0.5) / n * (r.theta_max - r.theta_min);
                const double lo = r.phi_min(theta), hi = r.phi_max(theta);
                for (int j = 0; j < n; ++j)
                {
                    const double phi = lo + (j + 0.5) / n * (hi - lo);
                    for (size_t b = 0; b < regions.size(); ++b)
                        if (b != a && strictly_inside(regions[b], theta, phi))
                            throw std::invalid_argument("angular support: regions " + std::to_string(a) + " and " +
                                                        std::to_string(b) + " overlap");
                }
            }
    }

    std::vector<std::string> AngularSupport::warnings() const
    {
        std::vector<std::string> out;
        for (size_t a = 0; a < regions.size(); ++a)
        {
            const auto &r = regions[a];
            auto slopes = [](const PiecewiseLinear &f)
            {
                std::vector<double> s;
                for (size_t i = 0; i + 1 < f.knots.size(); ++i)
                    s.push_back((f.values[i + 1] - f.values[i]) / (f.knots[i + 1] - f.knots[i]));
                return s;
            };
            const auto smax = slopes(r.phi_max), smin = slopes(r.phi_min);
            for (size_t i = 1; i < smax.size(); ++i)
                if (smax[i] > smax[i - 1] + 1e-12)
                {
                    out.push_back("region " + std::to_string(a) + ": phi_max is not concave, region is non-convex");
                    break;
                }
            for (size_t i = 1; i < smin.size(); ++i)
                if (smin[i] < smin[i - 1] - 1e-12)
                {
                    out.push_back("region " + std::to_string(a) + ": phi_min is not convex, region is non-convex");
                    break;
                }
        }
        return out;
    }

    // --- AngularDelayRegion / Support ---

    double AngularDelayRegion::volume() const
    {
        const auto b = angles.breakpoints();
        double v = 0.0;
        for (size_t i = 0; i + 1 < b.size(); ++i)
            for (auto [t, wt] : gauss_legendre(b[i], b[i + 1], 24))
                for (auto [p, wp] : gauss_legendre(angles.phi_min(t), angles.phi_max(t), 24))
                    v += wt * wp * (tau_max(t, p) - tau_min(t, p));
        return v;
    }

    void AngularDelayRegion::validate() const
    {
        angles.validate();
        tau_min.validate("tau_min");
        tau_max.validate("tau_max");
        if (tau_min.min_value() < 0.0)
            throw std::invalid_argument("delay bounds: tau_min must be non-negative");
        const auto b = angles.breakpoints();
        for (double t : b)
            for (int j = 0; j <= 8; ++j)
            {
                const double p = angles.phi_min(t) + j / 8.0 * (angles.phi_max(t) - angles.phi_min(t));
                if (tau_max(t, p) < tau_min(t, p))
                    throw std::invalid_argument("delay bounds: tau_max < tau_min");
            }
    }

    AngularDelaySupport AngularDelaySupport::box(double theta_min, double theta_max, double phi_min, double phi_max,
                                                 double tau_min, double tau_max)
    {
        AngularDelayRegion r;
        r.angles = AngularRegion::box(theta_min, theta_max, phi_min, phi_max);
        r.tau_min = GridFunction::constant(tau_min);
        r.tau_max = GridFunction::constant(tau_max);
        return AngularDelaySupport{{r}};
    }

    AngularSupport AngularDelaySupport::angular() const
    {
        AngularSupport s;
        for (const auto &r : regions)
            s.regions.push_back(r.angles);
        return s;
    }

    void AngularDelaySupport::validate() const
    {
        if (regions.empty())
            throw std::invalid_argument("angle-delay support: no regions");
        for (const auto &r : regions)
            r.validate();
        angular().validate();
    }

    // Largest signed second difference of a grid function along either axis, slope-normalized
    static double max_curvature(const GridFunction &f, double sign)
    {
        double worst = -1e300;
        auto slope = [&](double v0, double v1, double x0, double x1)
        { return (v1 - v0) / (x1 - x0); };
        const auto &tk = f.theta_knots, &pk = f.phi_knots;
        for (Eigen::Index j = 0; j < f.values.cols(); ++j)
            for (size_t i = 0; i + 2 < tk.size(); ++i)
                worst = std::max(worst, sign * (slope(f.values(i + 1, j), f.values(i + 2, j), tk[i + 1], tk[i + 2]) -
                                                slope(f.values(i, j), f.values(i + 1, j), tk[i], tk[i + 1])));
        for (Eigen::Index i = 0; i < f.values.rows(); ++i)
            for (size_t j = 0; j + 2 < pk.size(); ++j)
                worst = std::max(worst, sign * (slope(f.values(i, j + 1), f.values(i, j + 2), pk[j + 1], pk[j + 2]) -
                                                slope(f.values(i, j), f.values(i, j + 1), pk[j], pk[j + 1])));
        return worst;
    }

    std::vector<std::string> AngularDelaySupport::warnings() const
    {
        std::vector<std::string> out = angular().warnings();
        for (size_t a = 0; a < regions.size(); ++a)
        {
            const double scale = 1e-12 * std::max(1e-300, regions[a].tau_max.max_value());
            if (max_curvature(regions[a].tau_max, 1.0) > scale)
                out.push_back("region " + std::to_string(a) + ": tau_max is not concave, delay profile is non-convex");
            if (max_curvature(regions[a].tau_min, -1.0) > scale)
                out.push_back("region " + std::to_string(a) + ": tau_min is not convex, delay profile is non-convex");
        }
        return out;
    }

    SupportPoint sample_support_point(const AngularDelaySupport &support, std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> U(0.0, 1.0);
        std::vector<double> weight;
        for (const auto &r : support.regions)
            weight.push_back(r.volume());
        const bool by_volume = std::accumulate(weight.begin(), weight.end(), 0.0) > 0.0;
        if (!by_volume)
            for (size_t q = 0; q < weight.size(); ++q)
                weight[q] = support.regions[q].angles.area();
        double total = std::accumulate(weight.begin(), weight.end(), 0.0);
        if (!(total > 0.0))
        {
            // Zero-measure support: regions equally likely, uniform along each region
            std::fill(weight.begin(), weight.end(), 1.0);
            total = (double)weight.size();
        }

        double x = U(rng) * total;
        size_t q = 0;
        while (q + 1 < weight.size() && x > weight[q])
            x -= weight[q++];
        const auto &r = support.regions[q];

        if (!(r.angles.area() > 0.0))
        {
            const double theta = r.angles.theta_min + U(rng) * (r.angles.theta_max - r.angles.theta_min);
            const double lo = r.angles.phi_min(theta), hi = r.angles.phi_max(theta);
            const double phi = lo + U(rng) * (hi - lo);
            const double t0 = r.tau_min(theta, phi), t1 = r.tau_max(theta, phi);
            return {theta, phi, t0 + U(rng) * (t1 - t0)};
        }

        const auto b = r.angles.breakpoints();
        double pmin = 1e9, pmax = -1e9;
        for (double t : b)
            pmin = std::min(pmin, r.angles.phi_min(t)), pmax = std::max(pmax, r.angles.phi_max(t));
        const double tmax = r.tau_max.max_value();
        for (int it = 0; it < 1000000; ++it)
        {
            const double theta = r.angles.theta_min + U(rng) * (r.angles.theta_max - r.angles.theta_min);
            const double phi = pmin + U(rng) * (pmax - pmin);
            const double u = U(rng);
            if (phi < r.angles.phi_min(theta) || phi > r.angles.phi_max(theta))
                continue;
            const double lo = r.tau_min(theta, phi), hi = r.tau_max(theta, phi);
            if (!by_volume)
                return {theta, phi, lo};
            const double tau = u * tmax;
            if (tau < lo || tau > hi)
                continue;
            return {theta, phi, tau};
        }
        throw std::runtime_error("sample_support_point: rejection sampling failed");
    }
}
