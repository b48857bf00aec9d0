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

#include "fddcsi/types.hpp"

#include <random>
#include <string>
#include <vector>

namespace fddcsi
{
    // Piecewise-linear function of one variable, clamped outside the knot range
    struct PiecewiseLinear
    {
        std::vector<double> knots;
        std::vector<double> values;

        static PiecewiseLinear constant(double v);
        static PiecewiseLinear linear(double x0, double y0, double x1, double y1);
        double operator()(double x) const;
        bool is_constant() const { return values.size() == 1; }
        void validate(const char *name) const;
    };

    // Bilinear function on a (theta, phi) knot grid, clamped outside; values(i, j) at (theta_knots[i], phi_knots[j])
    struct GridFunction
    {
        std::vector<double> theta_knots;
        std::vector<double> phi_knots;
        RMatrix values;

        static GridFunction constant(double v);
        double operator()(double theta, double phi) const;
        double min_value() const { return values.minCoeff(); }
        double max_value() const { return values.maxCoeff(); }
        void validate(const char *name) const;
    };

    // theta in [theta_min, theta_max], phi in [phi_min(theta), phi_max(theta)]
    struct AngularRegion
    {
        double theta_min = 0.0;
        double theta_max = pi;
        PiecewiseLinear phi_min = PiecewiseLinear::constant(-pi);
        PiecewiseLinear phi_max = PiecewiseLinear::constant(pi);

        static AngularRegion box(double theta_min, double theta_max, double phi_min, double phi_max);
        bool contains(double theta, double phi) const;
        double area() const; // Measure in (theta, phi)
        std::vector<double> breakpoints() const;
        void validate() const;
    };

    struct AngularSupport
    {
        std::vector<AngularRegion> regions;

        static AngularSupport full_range();
        static AngularSupport box(double theta_min, double theta_max, double phi_min, double phi_max);
        double area() const;
        void validate() const;
        std::vector<std::string> warnings() const;
    };

    struct AngularDelayRegion
    {
        AngularRegion angles;
        GridFunction tau_min = GridFunction::constant(0.0);
        GridFunction tau_max = GridFunction::constant(0.0);

        double volume() const;
        void validate() const;
    };

    struct AngularDelaySupport
    {
        std::vector<AngularDelayRegion> regions;

        static AngularDelaySupport box(double theta_min, double theta_max, double phi_min, double phi_max,
                                       double tau_min, double tau_max);
        AngularSupport angular() const;
        void validate() const;
        std::vector<std::string> warnings() const;
    };

    // Uniform draw of (theta, phi, tau) over the support volume
    struct SupportPoint
    {
        double theta, phi, tau;
    };
    SupportPoint sample_support_point(const AngularDelaySupport &support, std::mt19937_64 &rng);

    // Wrap to [-pi, pi)
    double wrap_angle(double x);
}
